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

#include "autodis/analysis.h"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <ostream>
#include <random>

#include "autodis/error.h"

namespace autodis {
namespace {

std::size_t active_index_of(const ModelConfig& config, const FeatureContext& ctx, int field_id) {
  const FieldSchema& field = ctx.schema.field(field_id);
  if (field.kind != FieldKind::kNumerical) {
    throw InvalidArgument(fmt::format("field {} is categorical", field_id));
  }
  const std::vector<std::size_t> active = active_numeric_slots(config, ctx.schema);
  const auto it = std::find(active.begin(), active.end(), ctx.schema.slot(field_id));
  if (it == active.end()) {
    throw InvalidArgument(fmt::format("numerical field {} is not used by the model", field_id));
  }
  return static_cast<std::size_t>(it - active.begin());
}

}  // namespace

void Table::write(std::ostream& out, char delimiter) const {
  std::string line;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) line += delimiter;
    line += header[i];
  }
  out << line << '\n';
  for (const Vector& row : rows) {
    line.clear();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) line += delimiter;
      line += fmt::format("{}", row[i]);
    }
    out << line << '\n';
  }
}

Vector unit_grid(std::size_t n) {
  Vector grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return grid;
}

Table export_embeddings(const ModelParams& params, const ModelConfig& config,
                        const FeatureContext& ctx, int field_id, std::span<const double> grid) {
  const std::size_t k = active_index_of(config, ctx, field_id);
  Table table;
  table.header.emplace_back("x");
  for (int c = 0; c < config.embed_dim; ++c) table.header.push_back(fmt::format("e{}", c));
  for (double x : grid) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument(fmt::format("grid value {} outside [0, 1]", x));
    Vector row{x};
    const Vector e = numeric_field_embedding(params, config, ctx, k, x);
    row.insert(row.end(), e.begin(), e.end());
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table export_soft_distribution(const ModelParams& params, const ModelConfig& config,
                               const FeatureContext& ctx, int field_id,
                               std::span<const double> x_values) {
  if (config.encoder != NumericEncoder::kAutoDis) {
    throw InvalidArgument("soft distributions exist only for the AutoDis encoder");
  }
  const std::size_t k = active_index_of(config, ctx, field_id);
  const std::size_t slot = ctx.schema.slot(field_id);
  const AutoDisFieldParams& field = params.autodis[k];
  const TemperatureNet& tnet = params.temperature.size() == 1 ? params.temperature[0] : params.temperature[k];
  Table table;
  table.header = {"x", "tau"};
  for (std::size_t h = 0; h < field.net.buckets(); ++h) table.header.push_back(fmt::format("p{}", h));
  for (double x : x_values) {
    const Vector logits = project(x, field.net);
    const double tau = adaptive_tau(x, ctx.stats_vectors[slot], tnet);
    const Vector probs = soft_discretize(logits, tau);
    Vector row{x, tau};
    row.insert(row.end(), probs.begin(), probs.end());
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<int> resolve_field_order(std::string_view spec, const Schema& schema) {
  std::vector<int> order;
  if (spec.starts_with("random")) {
    std::uint64_t seed = 0;
    if (spec.starts_with("random:") || spec.starts_with("random(")) {
      std::string_view digits = spec.substr(7);
      if (digits.ends_with(")")) digits.remove_suffix(1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw InvalidArgument(fmt::format("bad random order '{}'", spec));
      }
    } else if (spec != "random") {
      throw InvalidArgument(fmt::format("bad random order '{}'", spec));
    }
    for (std::size_t j = 0; j < schema.num_numerical(); ++j) order.push_back(schema.numerical_field(j));
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
  }
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t end = spec.find(',', start);
    if (end == std::string_view::npos) end = spec.size();
    const std::string_view item = spec.substr(start, end - start);
    int id = -1;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), id);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw InvalidArgument(fmt::format("bad field id '{}' in order", item));
    }
    if (id < 0 || static_cast<std::size_t>(id) >= schema.num_fields() ||
        schema.field(id).kind != FieldKind::kNumerical) {
      throw InvalidArgument(fmt::format("order references unknown numerical field {}", id));
    }
    if (std::find(order.begin(), order.end(), id) != order.end()) {
      throw InvalidArgument(fmt::format("field {} appears twice in order", id));
    }
    order.push_back(id);
    start = end + 1;
  }
  return order;
}

std::vector<AblationStep> ablation_fields(const Dataset& train_set, const Dataset& valid_set,
                                          const Dataset& eval_set, const ModelConfig& config,
                                          const TrainConfig& train_config,
                                          const FeatureContext& ctx, std::span<const int> order,
                                          std::size_t seeds) {
  if (ctx.schema.num_numerical() == 0) throw InvalidArgument("ablation needs a numerical field");
  if (seeds == 0) throw InvalidArgument("ablation needs at least one seed");
  for (int id : order) {
    if (id < 0 || static_cast<std::size_t>(id) >= ctx.schema.num_fields() ||
        ctx.schema.field(id).kind != FieldKind::kNumerical) {
      throw InvalidArgument(fmt::format("order references unknown numerical field {}", id));
    }
  }
  std::vector<AblationStep> steps;
  for (std::size_t included = 0; included <= order.size(); ++included) {
    AblationStep step;
    step.fields.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(included));
    ModelConfig cfg = config;
    cfg.numeric_fields = step.fields;
    double logloss_sum = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
      TrainConfig tc = train_config;
      tc.seed = train_config.seed + s;
      const TrainResult run = train(train_set, valid_set, cfg, tc, ctx);
      const MetricsReport report = evaluate(eval_set, run.params, cfg, ctx);
      step.aucs.push_back(report.auc);
      logloss_sum += report.logloss;
      step.mean.n_eval = report.n_eval;
      step.mean.param_count = report.param_count;
    }
    double mean = 0.0;
    for (double a : step.aucs) mean += a;
    mean /= static_cast<double>(seeds);
    double var = 0.0;
    for (double a : step.aucs) var += (a - mean) * (a - mean);
    step.mean.auc = mean;
    step.mean.logloss = logloss_sum / static_cast<double>(seeds);
    step.auc_std = seeds > 1 ? std::sqrt(var / static_cast<double>(seeds - 1)) : 0.0;
    steps.push_back(std::move(step));
  }
  return steps;
}

Complexity measure_complexity(const ModelParams& params, const ModelConfig& config,
                              const FeatureContext& ctx, const Batch& batch, int repeats) {
  if (repeats < 1) throw InvalidArgument("repeats must be >= 1");
  Complexity out;
  out.param_count = parameter_count(params);
  for (int i = 0; i < 2; ++i) predict(batch, params, config, ctx);
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(repeats));
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const Vector probs = predict(batch, params, config, ctx);
    const auto stop = std::chrono::steady_clock::now();
    if (probs.size() != batch.size) throw Error("forward returned the wrong number of outputs");
    times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
  out.batch_inference_ms = times[times.size() / 2];
  return out;
}

}  // namespace autodis
