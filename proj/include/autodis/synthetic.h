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

#ifndef AUTODIS_SYNTHETIC_H_
#define AUTODIS_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "autodis/dataset.h"

namespace autodis {

enum class LabelFamily {
  kSin,       // a * sin(b * x) + c
  kLinear,    // a * x + c
  kConstant,  // c
};

// Generator for labelled tabular data. Numerical values are uniform on
// [0, 1]; the label is Bernoulli(sigmoid(logit)) where the logit depends on
// one informative numerical field and, optionally, a fixed random offset per
// categorical value. The remaining numerical fields are pure noise.
struct SyntheticSpec {
  std::size_t samples = 1000;
  std::size_t numerical_fields = 1;
  std::size_t categorical_fields = 0;
  int vocab_size = 4;
  std::size_t informative_field = 0;
  LabelFamily family = LabelFamily::kSin;
  double a = 4.0;
  double b = 6.0;
  double c = -1.0;
  double categorical_effect = 0.0;
};

// Logit contributed by the informative numerical value.
double synthetic_logit(const SyntheticSpec& spec, double x);

// Categorical fields come first in the schema, then numerical ones. Category
// ids run from 1 to vocab_size; index 0 stays free for unknown tokens.
Schema synthetic_schema(const SyntheticSpec& spec);

// Deterministic under `seed`. Throws DataError when the positive ratio falls
// outside [0.05, 0.95].
Dataset gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

std::string_view to_string(LabelFamily family);
LabelFamily parse_label_family(std::string_view text);

}  // namespace autodis

#endif  // AUTODIS_SYNTHETIC_H_
