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

#ifndef AUTODIS_STATS_H_
#define AUTODIS_STATS_H_

#include <cstddef>

#include "autodis/dataset.h"
#include "autodis/tensor.h"

namespace autodis {

// Number of points at which the empirical CDF is sampled.
inline constexpr std::size_t kCdfSamples = 10;

// Global statistics of one numerical field over the training split.
struct FieldStats {
  double x_min = 0.0;
  double x_max = 0.0;
  double mean = 0.0;
  // Empirical CDF at the midpoints x_min + (k + 0.5) * (x_max - x_min) / 10.
  Vector cdf_samples;
  std::size_t count = 0;

  bool operator==(const FieldStats&) const = default;
};

// Missing (NaN) cells are skipped.
FieldStats compute_stats(const Dataset& dataset, int field_id);

// (x - x_min) / (x_max - x_min) clamped to [0, 1]; 0.5 for a degenerate field.
double normalize_value(double x, const FieldStats& stats);

// Field summary fed to the temperature network: the CDF samples followed by
// the normalized mean (length kCdfSamples + 1).
Vector stats_vector(const FieldStats& stats);

// Replaces NaN numerical cells with the field mean. `stats` is indexed by
// numerical slot.
void impute_missing(Dataset& dataset, std::span<const FieldStats> stats);

}  // namespace autodis

#endif  // AUTODIS_STATS_H_
