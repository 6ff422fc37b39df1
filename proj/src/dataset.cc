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

#include "autodis/dataset.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "autodis/error.h"

namespace autodis {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(delimiter, start);
    if (end == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

}  // namespace

Vocabulary::Vocabulary(const Schema& schema)
    : maps_(schema.num_categorical()), limits_(schema.num_categorical()) {
  for (std::size_t s = 0; s < schema.num_categorical(); ++s) limits_[s] = schema.vocab_size(s);
}

int Vocabulary::index(std::size_t categorical_slot, std::string_view token) {
  auto& map = maps_.at(categorical_slot);
  if (auto it = map.find(std::string(token)); it != map.end()) return it->second;
  const int next = static_cast<int>(map.size()) + 1;
  if (frozen_ || next >= limits_[categorical_slot]) return 0;
  map.emplace(std::string(token), next);
  return next;
}

void Vocabulary::insert(std::size_t categorical_slot, std::string token, int index) {
  if (index < 1 || index >= limits_.at(categorical_slot)) {
    throw DataError(fmt::format("dictionary index {} out of range for categorical slot {}",
                                index, categorical_slot));
  }
  maps_[categorical_slot][std::move(token)] = index;
}

std::vector<std::pair<int, std::string>> Vocabulary::entries(std::size_t categorical_slot) const {
  std::vector<std::pair<int, std::string>> out;
  for (const auto& [token, idx] : maps_.at(categorical_slot)) out.emplace_back(idx, token);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t fnv1a64(std::string_view token) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : token) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Dataset parse_tabular(std::istream& in, const Schema& schema, char delimiter,
                      CategoricalMode mode, Vocabulary* vocabulary) {
  if (mode == CategoricalMode::kDictionary && vocabulary == nullptr &&
      schema.num_categorical() > 0) {
    throw InvalidArgument("dictionary mode requires a vocabulary");
  }
  Dataset dataset{schema, {}};
  const std::size_t expected = schema.num_fields() + 1;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split(line, delimiter);
    if (cells.size() != expected) {
      throw DataError(fmt::format("row {}: expected {} columns, found {}", row, expected,
                                  cells.size()));
    }
    Instance inst;
    inst.categorical_ids.reserve(schema.num_categorical());
    inst.numerical_values.reserve(schema.num_numerical());

    const std::string_view label = trim(cells[0]);
    if (label == "0") {
      inst.label = 0;
    } else if (label == "1") {
      inst.label = 1;
    } else {
      throw DataError(fmt::format("row {}: label '{}' is not 0 or 1", row, label));
    }

    for (const FieldSchema& f : schema.fields()) {
      const std::string_view cell = trim(cells[f.field_id + 1]);
      if (f.kind == FieldKind::kNumerical) {
        if (cell.empty()) {
          inst.numerical_values.push_back(std::numeric_limits<double>::quiet_NaN());
          continue;
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
          throw DataError(fmt::format("row {}: field {} value '{}' is not numeric", row,
                                      f.field_id, cell));
        }
        inst.numerical_values.push_back(v);
      } else {
        const std::size_t slot = schema.slot(f.field_id);
        int idx = 0;
        if (mode == CategoricalMode::kHash) {
          idx = static_cast<int>(fnv1a64(cell) % static_cast<std::uint64_t>(f.vocab_size));
        } else {
          idx = vocabulary->index(slot, cell);
        }
        inst.categorical_ids.push_back(idx);
      }
    }
    dataset.instances.push_back(std::move(inst));
  }
  if (dataset.empty()) throw DataError("no instances");
  return dataset;
}

Dataset load_tabular(const std::filesystem::path& path, const Schema& schema,
                     char delimiter, CategoricalMode mode, Vocabulary* vocabulary) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  return parse_tabular(in, schema, delimiter, mode, vocabulary);
}

void write_tabular(std::ostream& out, const Dataset& dataset, char delimiter) {
  const Schema& schema = dataset.schema;
  for (const Instance& inst : dataset.instances) {
    std::string line = fmt::format("{}", inst.label);
    for (const FieldSchema& f : schema.fields()) {
      line += delimiter;
      const std::size_t slot = schema.slot(f.field_id);
      if (f.kind == FieldKind::kCategorical) {
        line += fmt::format("{}", inst.categorical_ids[slot]);
      } else if (!std::isnan(inst.numerical_values[slot])) {
        line += fmt::format("{}", inst.numerical_values[slot]);
      }
    }
    line += '\n';
    out << line;
  }
}

Batch make_batch(const Dataset& dataset, std::span<const std::size_t> ids) {
  Batch batch;
  batch.size = ids.size();
  batch.num_categorical = dataset.schema.num_categorical();
  batch.num_numerical = dataset.schema.num_numerical();
  batch.categorical_ids.reserve(batch.size * batch.num_categorical);
  batch.numerical_values.reserve(batch.size * batch.num_numerical);
  batch.labels.reserve(batch.size);
  batch.instance_ids.assign(ids.begin(), ids.end());
  for (std::size_t id : ids) {
    const Instance& inst = dataset.instances.at(id);
    batch.categorical_ids.insert(batch.categorical_ids.end(), inst.categorical_ids.begin(),
                                 inst.categorical_ids.end());
    batch.numerical_values.insert(batch.numerical_values.end(), inst.numerical_values.begin(),
                                  inst.numerical_values.end());
    batch.labels.push_back(inst.label);
  }
  return batch;
}

std::vector<Batch> make_batches(const Dataset& dataset, std::size_t batch_size,
                                std::optional<std::uint64_t> shuffle_seed) {
  if (batch_size == 0) throw InvalidArgument("batch_size must be at least 1");
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (shuffle_seed) {
    std::mt19937_64 rng(*shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<Batch> batches;
  batches.reserve((order.size() + batch_size - 1) / batch_size);
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, order.size() - start);
    batches.push_back(make_batch(dataset, std::span(order).subspan(start, n)));
  }
  return batches;
}

std::pair<Dataset, Dataset> split_holdout(const Dataset& dataset, double holdout_fraction,
                                          std::uint64_t seed) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw InvalidArgument(fmt::format("holdout fraction {} not in (0, 1)", holdout_fraction));
  }
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto holdout = static_cast<std::size_t>(
      std::llround(holdout_fraction * static_cast<double>(dataset.size())));
  if (holdout == 0 || holdout >= dataset.size()) {
    throw DataError(fmt::format("cannot split {} instances with holdout fraction {}",
                                dataset.size(), holdout_fraction));
  }
  // Keep the original relative order inside each part.
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(holdout));
  std::sort(order.begin() + static_cast<std::ptrdiff_t>(holdout), order.end());
  Dataset train{dataset.schema, {}};
  Dataset rest{dataset.schema, {}};
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < holdout ? rest : train).instances.push_back(dataset.instances[order[i]]);
  }
  return {std::move(train), std::move(rest)};
}

char parse_delimiter(std::string_view text) {
  if (text == "tab" || text == "\\t") return '\t';
  if (text == "comma") return ',';
  if (text == "space") return ' ';
  if (text.size() == 1) return text[0];
  throw InvalidArgument(fmt::format("bad delimiter '{}'", text));
}

std::string delimiter_name(char delimiter) {
  switch (delimiter) {
    case '\t':
      return "tab";
    case ',':
      return "comma";
    case ' ':
      return "space";
    default:
      return std::string(1, delimiter);
  }
}

}  // namespace autodis
