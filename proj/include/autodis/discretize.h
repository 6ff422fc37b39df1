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

#ifndef AUTODIS_DISCRETIZE_H_
#define AUTODIS_DISCRETIZE_H_

#include <span>
#include <string_view>

#include "autodis/stats.h"
#include "autodis/tensor.h"

namespace autodis {

enum class HardKind {
  kEdd,  // equal width
  kEfd,  // equal frequency
  kLd,   // floor(ln(x')^2), x' = x - x_min + 1 (shifted) or max(x, 1)
};

// floor((x - x_min) / w) with w = (x_max - x_min) / buckets, clamped to
// [0, buckets - 1]. A degenerate field maps everything to bucket 0.
int edd_bucket(double x, const FieldStats& stats, int buckets);

// floor(ln(shifted)^2) for shifted >= 1.
int ld_bucket(double shifted);

// The k / buckets quantiles (k = 1..buckets-1) of sorted values, using
// linear interpolation between order statistics.
Vector quantile_boundaries(std::span<const double> sorted_values, int buckets);

// A fitted hard discretizer d(x) for one numerical field. Operates on raw
// (unnormalized) values.
class HardDiscretizer {
 public:
  static HardDiscretizer fit_edd(const FieldStats& stats, int buckets);
  // Boundaries that no training value exceeds, and duplicates, are dropped.
  static HardDiscretizer fit_efd(std::span<const double> sorted_values, int buckets,
                                 const FieldStats& stats);
  // Table size follows the largest bucket seen on the training values.
  static HardDiscretizer fit_ld(std::span<const double> values, const FieldStats& stats,
                                bool shift = true);

  // Rebuilds a fitted discretizer from persisted state.
  static HardDiscretizer restore(HardKind kind, int requested_buckets, Vector boundaries,
                                 int ld_max_bucket, const FieldStats& stats,
                                 bool ld_shift = true);

  int bucket(double x) const;
  // Rows of the embedding table this discretizer feeds.
  int num_buckets() const;

  HardKind kind() const { return kind_; }
  int requested_buckets() const { return requested_; }
  const Vector& boundaries() const { return boundaries_; }
  int ld_max_bucket() const { return ld_max_; }
  bool ld_shift() const { return ld_shift_; }

 private:
  double ld_argument(double x) const;

  HardKind kind_ = HardKind::kEdd;
  int requested_ = 1;
  Vector boundaries_;
  int ld_max_ = 0;
  bool ld_shift_ = true;
  FieldStats stats_;
};

std::string_view to_string(HardKind kind);

}  // namespace autodis

#endif  // AUTODIS_DISCRETIZE_H_
