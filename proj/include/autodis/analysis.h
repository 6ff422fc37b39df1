// Copyright 2026 The AutoDis Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AUTODIS_ANALYSIS_H_
#define AUTODIS_ANALYSIS_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autodis/feature_context.h"
#include "autodis/model.h"
#include "autodis/trainer.h"

namespace autodis {

// Delimiter-separated table with a one-line header.
struct Table {
  std::vector<std::string> header;
  std::vector<Vector> rows;

  void write(std::ostream& out, char delimiter = '\t') const;
};

// n evenly spaced points on [0, 1] (n = 1 gives {0}).
Vector unit_grid(std::size_t n);

// One row per normalized grid value: x, then the d embedding coordinates.
Table export_embeddings(const ModelParams& params, const ModelConfig& config,
                        const FeatureContext& ctx, int field_id, std::span<const double> grid);

// One row per normalized value: x, tau_x, then H bucket probabilities.
Table export_soft_distribution(const ModelParams& params, const ModelConfig& config,
                               const FeatureContext& ctx, int field_id,
                               std::span<const double> x_values);

struct AblationStep {
  std::vector<int> fields;  // numerical field ids included so far
  MetricsReport mean;       // averaged over seeds
  double auc_std = 0.0;
  std::vector<double> aucs;
};

// Parses "0,3,1" or "random:<seed>" into numerical field ids.
std::vector<int> resolve_field_order(std::string_view spec, const Schema& schema);

// Categorical-only baseline followed by one run per cumulatively added
// numerical field. Each step trains `seeds` models (seed, seed+1, ...) and
// reports their mean metrics on `eval_set`.
std::vector<AblationStep> ablation_fields(const Dataset& train_set, const Dataset& valid_set,
                                          const Dataset& eval_set, const ModelConfig& config,
                                          const TrainConfig& train_config,
                                          const FeatureContext& ctx, std::span<const int> order,
                                          std::size_t seeds);

struct Complexity {
  std::size_t param_count = 0;
  double batch_inference_ms = 0.0;
};

// Exact parameter count and median wall-clock of `repeats` forward passes
// after two warm-up passes.
Complexity measure_complexity(const ModelParams& params, const ModelConfig& config,
                              const FeatureContext& ctx, const Batch& batch, int repeats = 30);

}  // namespace autodis

#endif  // AUTODIS_ANALYSIS_H_
