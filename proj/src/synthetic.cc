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

#include "autodis/synthetic.h"

#include <fmt/format.h>

#include <cmath>
#include <random>

#include "autodis/error.h"
#include "autodis/ops.h"

namespace autodis {

double synthetic_logit(const SyntheticSpec& spec, double x) {
  switch (spec.family) {
    case LabelFamily::kSin:
      return spec.a * std::sin(spec.b * x) + spec.c;
    case LabelFamily::kLinear:
      return spec.a * x + spec.c;
    case LabelFamily::kConstant:
      return spec.c;
  }
  return spec.c;
}

Schema synthetic_schema(const SyntheticSpec& spec) {
  std::vector<FieldSchema> fields;
  for (std::size_t i = 0; i < spec.categorical_fields; ++i) {
    fields.push_back({static_cast<int>(fields.size()), FieldKind::kCategorical, spec.vocab_size + 1});
  }
  for (std::size_t i = 0; i < spec.numerical_fields; ++i) {
    fields.push_back({static_cast<int>(fields.size()), FieldKind::kNumerical, 0});
  }
  return Schema(std::move(fields));
}

Dataset gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.samples == 0) throw DataError("synthetic spec has zero samples");
  if (spec.numerical_fields == 0) throw DataError("synthetic spec needs a numerical field");
  if (spec.informative_field >= spec.numerical_fields) {
    throw DataError(fmt::format("informative field {} out of range for {} numerical fields",
                                spec.informative_field, spec.numerical_fields));
  }
  if (spec.categorical_fields > 0 && spec.vocab_size < 1) {
    throw DataError("synthetic categorical fields need vocab_size >= 1");
  }

  Dataset dataset{synthetic_schema(spec), {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Vector> offsets(spec.categorical_fields, Vector(spec.vocab_size));
  for (Vector& field : offsets) {
    for (double& o : field) o = spec.categorical_effect * (2.0 * unit(rng) - 1.0);
  }
  std::uniform_int_distribution<int> category(0, std::max(0, spec.vocab_size - 1));

  dataset.instances.reserve(spec.samples);
  std::size_t positives = 0;
  for (std::size_t n = 0; n < spec.samples; ++n) {
    Instance inst;
    double logit = 0.0;
    for (std::size_t i = 0; i < spec.categorical_fields; ++i) {
      const int id = category(rng);
      inst.categorical_ids.push_back(id + 1);
      logit += offsets[i][id];
    }
    for (std::size_t j = 0; j < spec.numerical_fields; ++j) {
      inst.numerical_values.push_back(unit(rng));
    }
    logit += synthetic_logit(spec, inst.numerical_values[spec.informative_field]);
    inst.label = unit(rng) < sigmoid(logit) ? 1 : 0;
    positives += inst.label;
    dataset.instances.push_back(std::move(inst));
  }

  const double ratio = static_cast<double>(positives) / static_cast<double>(spec.samples);
  if (ratio < 0.05 || ratio > 0.95) {
    throw DataError(fmt::format("degenerate labels: positive ratio {:.4f}", ratio));
  }
  return dataset;
}

std::string_view to_string(LabelFamily family) {
  switch (family) {
    case LabelFamily::kSin:
      return "sin";
    case LabelFamily::kLinear:
      return "linear";
    case LabelFamily::kConstant:
      return "constant";
  }
  return "sin";
}

LabelFamily parse_label_family(std::string_view text) {
  if (text == "sin") return LabelFamily::kSin;
  if (text == "linear") return LabelFamily::kLinear;
  if (text == "constant") return LabelFamily::kConstant;
  throw InvalidArgument(fmt::format("unknown label family '{}'", text));
}

}  // namespace autodis
