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

#include "autodis/discretize.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "autodis/error.h"

namespace autodis {
namespace {

void check_buckets(int buckets) {
  if (buckets < 1) throw InvalidArgument(fmt::format("bucket count must be >= 1, got {}", buckets));
}

}  // namespace

int edd_bucket(double x, const FieldStats& stats, int buckets) {
  check_buckets(buckets);
  if (!(stats.x_max > stats.x_min)) return 0;
  const double width = (stats.x_max - stats.x_min) / buckets;
  const double raw = std::floor((x - stats.x_min) / width);
  return static_cast<int>(std::clamp(raw, 0.0, static_cast<double>(buckets - 1)));
}

int ld_bucket(double shifted) {
  const double l = std::log(shifted);
  return static_cast<int>(std::floor(l * l));
}

Vector quantile_boundaries(std::span<const double> sorted_values, int buckets) {
  check_buckets(buckets);
  if (sorted_values.empty()) throw InvalidArgument("quantiles of an empty sample");
  Vector out;
  const double last = static_cast<double>(sorted_values.size() - 1);
  for (int k = 1; k < buckets; ++k) {
    const double pos = last * static_cast<double>(k) / buckets;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    out.push_back(sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]));
  }
  return out;
}

HardDiscretizer HardDiscretizer::fit_edd(const FieldStats& stats, int buckets) {
  check_buckets(buckets);
  HardDiscretizer d;
  d.kind_ = HardKind::kEdd;
  d.requested_ = buckets;
  d.stats_ = stats;
  return d;
}

HardDiscretizer HardDiscretizer::fit_efd(std::span<const double> sorted_values, int buckets,
                                         const FieldStats& stats) {
  Vector raw = quantile_boundaries(sorted_values, buckets);
  const double top = sorted_values.back();
  HardDiscretizer d;
  d.kind_ = HardKind::kEfd;
  d.requested_ = buckets;
  d.stats_ = stats;
  for (double b : raw) {
    if (b < top && (d.boundaries_.empty() || b > d.boundaries_.back())) d.boundaries_.push_back(b);
  }
  return d;
}

HardDiscretizer HardDiscretizer::fit_ld(std::span<const double> values, const FieldStats& stats,
                                        bool shift) {
  HardDiscretizer d;
  d.kind_ = HardKind::kLd;
  d.stats_ = stats;
  d.ld_shift_ = shift;
  for (double v : values) {
    if (std::isnan(v)) continue;
    d.ld_max_ = std::max(d.ld_max_, ld_bucket(d.ld_argument(v)));
  }
  d.requested_ = d.ld_max_ + 1;
  return d;
}

HardDiscretizer HardDiscretizer::restore(HardKind kind, int requested_buckets, Vector boundaries,
                                         int ld_max_bucket, const FieldStats& stats,
                                         bool ld_shift) {
  HardDiscretizer d;
  d.kind_ = kind;
  d.requested_ = requested_buckets;
  d.boundaries_ = std::move(boundaries);
  d.ld_max_ = ld_max_bucket;
  d.ld_shift_ = ld_shift;
  d.stats_ = stats;
  if (!std::is_sorted(d.boundaries_.begin(), d.boundaries_.end())) {
    throw DataError("restored discretizer boundaries are not sorted");
  }
  return d;
}

double HardDiscretizer::ld_argument(double x) const {
  if (ld_shift_) return std::max(x, stats_.x_min) - stats_.x_min + 1.0;
  return std::max(x, 1.0);
}

int HardDiscretizer::bucket(double x) const {
  switch (kind_) {
    case HardKind::kEdd:
      return edd_bucket(x, stats_, requested_);
    case HardKind::kEfd:
      return static_cast<int>(std::lower_bound(boundaries_.begin(), boundaries_.end(), x) -
                              boundaries_.begin());
    case HardKind::kLd:
      return std::min(ld_bucket(ld_argument(x)), ld_max_);
  }
  return 0;
}

int HardDiscretizer::num_buckets() const {
  switch (kind_) {
    case HardKind::kEdd:
      return requested_;
    case HardKind::kEfd:
      return static_cast<int>(boundaries_.size()) + 1;
    case HardKind::kLd:
      return ld_max_ + 1;
  }
  return 1;
}

std::string_view to_string(HardKind kind) {
  switch (kind) {
    case HardKind::kEdd:
      return "edd";
    case HardKind::kEfd:
      return "efd";
    case HardKind::kLd:
      return "ld";
  }
  return "edd";
}

}  // namespace autodis
