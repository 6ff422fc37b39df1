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

#include "autodis/trainer.h"

#include <fmt/format.h>

#include <cmath>

#include "autodis/error.h"
#include "autodis/metrics.h"

namespace autodis {

MetricsReport evaluate(const Dataset& dataset, const ModelParams& params,
                       const ModelConfig& config, const FeatureContext& ctx,
                       std::size_t batch_size) {
  if (dataset.empty()) throw DataError("cannot evaluate on an empty dataset");
  Vector probs;
  Vector labels;
  probs.reserve(dataset.size());
  labels.reserve(dataset.size());
  for (const Batch& batch : make_batches(dataset, batch_size, std::nullopt)) {
    const Vector p = predict(batch, params, config, ctx);
    probs.insert(probs.end(), p.begin(), p.end());
    labels.insert(labels.end(), batch.labels.begin(), batch.labels.end());
  }
  MetricsReport report;
  report.auc = auc(probs, labels);
  report.logloss = logloss_metric(probs, labels);
  report.n_eval = dataset.size();
  report.param_count = parameter_count(params);
  return report;
}

TrainResult train(const Dataset& train_set, const Dataset& valid_set, const ModelConfig& config,
                  const TrainConfig& train_config, const FeatureContext& ctx,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  if (train_set.empty() || valid_set.empty()) throw DataError("train and validation splits must be non-empty");
  if (train_config.batch_size == 0) throw InvalidArgument("batch_size must be at least 1");

  Rng rng(train_config.seed);
  ModelParams params = init_params(config, ctx, rng);
  AdamState adam = AdamState::for_params(
      params, {train_config.lr, train_config.beta1, train_config.beta2, train_config.eps});

  TrainResult result;
  result.params = params;
  result.best_valid_auc = -1.0;
  int stale_epochs = 0;
  bool have_best = false;

  for (int epoch = 1; epoch <= train_config.epochs; ++epoch) {
    const std::uint64_t shuffle_seed = rng();
    double loss_sum = 0.0;
    std::size_t loss_batches = 0;
    bool stop = false;
    for (const Batch& batch : make_batches(train_set, train_config.batch_size, shuffle_seed)) {
      double batch_loss = 0.0;
      try {
        ForwardResult fwd = forward(batch, params, config, ctx);
        batch_loss = loss(fwd.probs, batch.labels, params, config.l2);
        if (!std::isfinite(batch_loss)) {
          throw DivergenceError(fmt::format("non-finite loss at step {}", result.steps + 1));
        }
        const ModelParams grads = backward(fwd.cache, batch.labels, params, config);
        adam_step(params, grads, adam);
      } catch (const DivergenceError& e) {
        result.diverged = true;
        result.divergence_reason = e.what();
        break;
      }
      loss_sum += batch_loss;
      ++loss_batches;
      ++result.steps;
      if (train_config.max_steps > 0 && result.steps >= train_config.max_steps) {
        stop = true;
        break;
      }
    }
    if (result.diverged) break;

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_batches > 0 ? loss_sum / static_cast<double>(loss_batches) : 0.0;
    MetricsReport valid;
    try {
      valid = evaluate(valid_set, params, config, ctx);
    } catch (const DivergenceError& e) {
      result.diverged = true;
      result.divergence_reason = e.what();
      break;
    }
    record.valid_auc = valid.auc;
    record.valid_logloss = valid.logloss;
    if (!std::isfinite(record.valid_logloss)) {
      result.diverged = true;
      result.divergence_reason = fmt::format("non-finite validation loss at epoch {}", epoch);
      break;
    }
    result.history.push_back(record);
    if (on_epoch) on_epoch(record);

    if (!have_best || record.valid_auc > result.best_valid_auc) {
      have_best = true;
      result.best_valid_auc = record.valid_auc;
      result.best_epoch = epoch;
      result.params = params;
      stale_epochs = 0;
    } else if (++stale_epochs >= train_config.patience) {
      break;
    }
    if (stop) break;
  }
  return result;
}

}  // namespace autodis
