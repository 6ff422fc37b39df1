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

#ifndef AUTODIS_TRAINER_H_
#define AUTODIS_TRAINER_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "autodis/adam.h"
#include "autodis/dataset.h"
#include "autodis/feature_context.h"
#include "autodis/model.h"

namespace autodis {

struct TrainConfig {
  int epochs = 5;
  std::size_t batch_size = 256;
  double lr = 1e-3;
  std::uint64_t seed = 1;
  int patience = 3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Stop after this many optimizer steps; 0 means no limit.
  std::size_t max_steps = 0;
};

struct MetricsReport {
  double auc = 0.5;
  double logloss = 0.0;
  std::size_t n_eval = 0;
  std::size_t param_count = 0;
  double batch_inference_ms = 0.0;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;  // mean batch loss, regularizer included
  double valid_auc = 0.5;
  double valid_logloss = 0.0;
};

struct TrainResult {
  ModelParams params;  // best-validation-AUC checkpoint
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_valid_auc = 0.0;
  std::size_t steps = 0;
  bool diverged = false;
  std::string divergence_reason;
};

// AUC and LogLoss of `params` on `dataset`; param_count is filled in too.
MetricsReport evaluate(const Dataset& dataset, const ModelParams& params,
                       const ModelConfig& config, const FeatureContext& ctx,
                       std::size_t batch_size = 4096);

// Mini-batch Adam with early stopping on validation AUC. Deterministic given
// config.seed: one generator initializes the parameters and then seeds the
// per-epoch shuffles. A non-finite loss or gradient ends training with
// `diverged` set and the last finite checkpoint returned.
TrainResult train(const Dataset& train_set, const Dataset& valid_set, const ModelConfig& config,
                  const TrainConfig& train_config, const FeatureContext& ctx,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

}  // namespace autodis

#endif  // AUTODIS_TRAINER_H_
