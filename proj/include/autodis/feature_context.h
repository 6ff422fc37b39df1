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

#ifndef AUTODIS_FEATURE_CONTEXT_H_
#define AUTODIS_FEATURE_CONTEXT_H_

#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "autodis/dataset.h"
#include "autodis/discretize.h"
#include "autodis/stats.h"

namespace autodis {

// Everything fitted on the training split that is not a trainable
// parameter: categorical dictionaries, numerical field statistics and,
// when a hard encoder is used, the fitted discretizers. Immutable once built.
struct FeatureContext {
  Schema schema;
  CategoricalMode mode = CategoricalMode::kDictionary;
  Vocabulary vocabulary;
  std::vector<FieldStats> stats;          // per numerical slot
  std::vector<Vector> stats_vectors;      // per numerical slot
  std::vector<HardDiscretizer> discretizers;  // per numerical slot, or empty

  // Computes statistics on `train`. `vocabulary` is frozen and stored.
  static FeatureContext fit(const Dataset& train, CategoricalMode mode, Vocabulary vocabulary);

  // Fits one discretizer per numerical slot. `buckets` holds one count per
  // slot, or a single count shared by all (ignored for LD).
  void fit_discretizers(const Dataset& train, HardKind kind, std::span<const int> buckets,
                        bool ld_shift = true);

  // Missing values (NaN) become the training mean.
  double imputed(std::size_t numerical_slot, double raw) const {
    return std::isnan(raw) ? stats[numerical_slot].mean : raw;
  }
  double normalized(std::size_t numerical_slot, double raw) const {
    return normalize_value(imputed(numerical_slot, raw), stats[numerical_slot]);
  }

  // Flat text: header lines, then "field_id key value" lines.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static FeatureContext load(std::istream& in);
  static FeatureContext load(const std::filesystem::path& path);
};

}  // namespace autodis

#endif  // AUTODIS_FEATURE_CONTEXT_H_
