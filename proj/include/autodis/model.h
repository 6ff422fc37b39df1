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

#ifndef AUTODIS_MODEL_H_
#define AUTODIS_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autodis/autodis.h"
#include "autodis/dataset.h"
#include "autodis/discretize.h"
#include "autodis/embedding.h"
#include "autodis/encoders.h"
#include "autodis/feature_context.h"
#include "autodis/ops.h"
#include "autodis/random.h"

namespace autodis {

enum class NumericEncoder { kAutoDis, kFieldEmbedding, kYouTube, kDlrm, kHard };

struct AutoDisConfig {
  int buckets = 20;
  double alpha = 0.2;
  double tau = 1e-3;
  double epsilon = 0.0;  // 0 selects tau / 2
  Aggregation aggregation;
  int temperature_hidden = 64;
  bool adaptive_tau = true;
  bool shared_temperature = false;
  bool bias = false;

  double resolved_epsilon() const { return epsilon > 0.0 ? epsilon : tau / 2.0; }
};

struct ModelConfig {
  int embed_dim = 16;
  std::vector<int> hidden = {64, 32};
  NumericEncoder encoder = NumericEncoder::kAutoDis;
  AutoDisConfig autodis;
  HardKind hard_kind = HardKind::kEdd;
  std::vector<int> hard_buckets = {10};
  bool ld_shift = true;
  std::vector<int> dlrm_hidden = {512, 256};
  bool use_fm = false;
  double l2 = 0.0;
  double slope = kDefaultLeakySlope;
  // Numerical field ids fed to the model; nullopt means all of them.
  std::optional<std::vector<int>> numeric_fields;
};

// Numerical slots the model reads, in the order the config lists them.
std::vector<std::size_t> active_numeric_slots(const ModelConfig& config, const Schema& schema);

struct AutoDisFieldParams {
  AutoDisNet net;
  MetaEmbeddings me;
};

// Trainable parameters. A gradient set is a ModelParams of identical shape.
struct ModelParams {
  std::vector<EmbeddingTable> categorical;      // per categorical slot
  std::vector<AutoDisFieldParams> autodis;      // per active numerical field
  std::vector<TemperatureNet> temperature;      // per active field, or one shared
  std::vector<Matrix> field_embeddings;         // 1 x d per active field
  std::vector<EmbeddingTable> bucket_tables;    // per active field
  Mlp dlrm;
  Mlp tower;
  // Bumped on every in-place update; forward caches record it.
  std::uint64_t version = 0;

  ModelParams zeros_like() const;
};

struct TensorRef {
  std::string name;
  std::span<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool regularized = true;
};

struct ConstTensorRef {
  std::string name;
  std::span<const double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool regularized = true;
};

// Every trainable tensor in a fixed order. The order and names depend only on
// the shapes, so two parameter sets of one shape line up index by index.
std::vector<TensorRef> named_tensors(ModelParams& params);
std::vector<ConstTensorRef> named_tensors(const ModelParams& params);

std::size_t parameter_count(const ModelParams& params);

// Deterministic in `seed`. Hard encoders need ctx.discretizers.
ModelParams init_params(const ModelConfig& config, const FeatureContext& ctx, std::uint64_t seed);
ModelParams init_params(const ModelConfig& config, const FeatureContext& ctx, Rng& rng);

// Width of the tower input for this config and schema.
std::size_t tower_input_dim(const ModelConfig& config, const Schema& schema);

struct InstanceCache {
  std::vector<int> categorical_ids;
  Vector x_norm;  // per active field
  std::vector<int> buckets;
  std::vector<EmbedCache> autodis;
  Vector dlrm_input;
  MlpCache dlrm;
  std::vector<Vector> field_embeddings;  // categorical first, then numerical
  MlpCache tower;
  double prob = 0.5;
};

struct ForwardCache {
  std::uint64_t version = 0;
  std::vector<InstanceCache> instances;
};

struct ForwardResult {
  Vector probs;
  ForwardCache cache;
};

ForwardResult forward(const Batch& batch, const ModelParams& params, const ModelConfig& config,
                      const FeatureContext& ctx);

// Probabilities only.
Vector predict(const Batch& batch, const ModelParams& params, const ModelConfig& config,
               const FeatureContext& ctx);

// Sum over i < j of <e_i, e_j>, through 0.5 * (|sum e|^2 - sum |e|^2).
double fm_interaction(std::span<const Vector> embeddings);

inline constexpr double kProbClip = 1e-7;

// Mean binary cross-entropy with probabilities clipped to [1e-7, 1 - 1e-7].
double binary_logloss(std::span<const double> probs, std::span<const double> labels);

// Sum of squared entries of all regularized tensors.
double l2_penalty(const ModelParams& params);

// binary_logloss + lambda * l2_penalty.
double loss(std::span<const double> probs, std::span<const double> labels,
            const ModelParams& params, double lambda);

// Gradient of `loss` for the batch recorded in `cache`. The output-side
// derivative is (p - y) / B.
ModelParams backward(const ForwardCache& cache, std::span<const double> labels,
                     const ModelParams& params, const ModelConfig& config);

// Embedding of one active numerical field at a normalized value. Only the
// per-field encoders (AutoDis, FieldEmbedding, Hard) define one.
Vector numeric_field_embedding(const ModelParams& params, const ModelConfig& config,
                               const FeatureContext& ctx, std::size_t active_index, double x_norm);

std::string_view to_string(NumericEncoder encoder);
NumericEncoder parse_numeric_encoder(std::string_view text, HardKind* hard_kind);
std::string encoder_name(const ModelConfig& config);

}  // namespace autodis

#endif  // AUTODIS_MODEL_H_
