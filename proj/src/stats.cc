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

#include "autodis/stats.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "autodis/error.h"

namespace autodis {

FieldStats compute_stats(const Dataset& dataset, int field_id) {
  const FieldSchema& field = dataset.schema.field(field_id);
  if (field.kind != FieldKind::kNumerical) {
    throw InvalidArgument(fmt::format("field {} is categorical; stats need a numerical field",
                                      field_id));
  }
  const std::size_t slot = dataset.schema.slot(field_id);
  Vector values;
  values.reserve(dataset.size());
  for (const Instance& inst : dataset.instances) {
    const double v = inst.numerical_values[slot];
    if (!std::isnan(v)) values.push_back(v);
  }
  if (values.empty()) {
    throw DataError(fmt::format("field {} has no observed values", field_id));
  }
  std::sort(values.begin(), values.end());

  FieldStats stats;
  stats.count = values.size();
  stats.x_min = values.front();
  stats.x_max = values.back();
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = std::clamp(sum / static_cast<double>(values.size()), stats.x_min, stats.x_max);

  stats.cdf_samples.resize(kCdfSamples);
  const double width = stats.x_max - stats.x_min;
  for (std::size_t k = 0; k < kCdfSamples; ++k) {
    const double point =
        stats.x_min + (static_cast<double>(k) + 0.5) * width / static_cast<double>(kCdfSamples);
    const auto at_or_below = std::upper_bound(values.begin(), values.end(), point) - values.begin();
    stats.cdf_samples[k] = static_cast<double>(at_or_below) / static_cast<double>(values.size());
  }
  return stats;
}

double normalize_value(double x, const FieldStats& stats) {
  if (!(stats.x_max > stats.x_min)) return 0.5;
  return std::clamp((x - stats.x_min) / (stats.x_max - stats.x_min), 0.0, 1.0);
}

Vector stats_vector(const FieldStats& stats) {
  Vector out = stats.cdf_samples;
  out.push_back(normalize_value(stats.mean, stats));
  return out;
}

void impute_missing(Dataset& dataset, std::span<const FieldStats> stats) {
  if (stats.size() != dataset.schema.num_numerical()) {
    throw InvalidArgument("impute_missing: stats count does not match numerical fields");
  }
  for (Instance& inst : dataset.instances) {
    for (std::size_t j = 0; j < stats.size(); ++j) {
      if (std::isnan(inst.numerical_values[j])) inst.numerical_values[j] = stats[j].mean;
    }
  }
}

}  // namespace autodis
