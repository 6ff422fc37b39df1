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

#ifndef AUTODIS_DATASET_H_
#define AUTODIS_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "autodis/schema.h"
#include "autodis/tensor.h"

namespace autodis {

// One record: categorical indices in categorical-slot order, raw numerical
// values in numerical-slot order (NaN marks a missing cell), binary label.
struct Instance {
  std::vector<int> categorical_ids;
  Vector numerical_values;
  int label = 0;

  bool operator==(const Instance&) const = default;
};

struct Dataset {
  Schema schema;
  std::vector<Instance> instances;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }
};

// Per categorical slot token dictionaries for CategoricalMode::kDictionary.
// While unfrozen, unseen tokens get the next free index (1, 2, ...); once the
// field is full, or after freeze(), unseen tokens map to the reserved index 0.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(const Schema& schema);

  int index(std::size_t categorical_slot, std::string_view token);
  void insert(std::size_t categorical_slot, std::string token, int index);
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  // Entries of one slot ordered by index.
  std::vector<std::pair<int, std::string>> entries(std::size_t categorical_slot) const;

 private:
  std::vector<std::unordered_map<std::string, int>> maps_;
  std::vector<int> limits_;
  bool frozen_ = false;
};

std::uint64_t fnv1a64(std::string_view token);

// Reads delimiter-separated rows "label, field_0, ..., field_{n-1}".
// `vocabulary` is required in dictionary mode and ignored in hash mode.
Dataset load_tabular(const std::filesystem::path& path, const Schema& schema,
                     char delimiter, CategoricalMode mode, Vocabulary* vocabulary);
Dataset parse_tabular(std::istream& in, const Schema& schema, char delimiter,
                      CategoricalMode mode, Vocabulary* vocabulary);

// Writes in the load_tabular format; categorical cells as decimal indices and
// numerical cells with round-trip precision.
void write_tabular(std::ostream& out, const Dataset& dataset, char delimiter);

// Columnar block of instances.
struct Batch {
  std::size_t size = 0;
  std::size_t num_categorical = 0;
  std::size_t num_numerical = 0;
  std::vector<int> categorical_ids;  // size x num_categorical
  Vector numerical_values;           // size x num_numerical, raw
  Vector labels;
  std::vector<std::size_t> instance_ids;

  int categorical(std::size_t i, std::size_t slot) const {
    return categorical_ids[i * num_categorical + slot];
  }
  double numerical(std::size_t i, std::size_t slot) const {
    return numerical_values[i * num_numerical + slot];
  }
};

Batch make_batch(const Dataset& dataset, std::span<const std::size_t> ids);

// One epoch of batches. With a seed the order is a seeded permutation,
// without one it is insertion order. The last batch may be short.
std::vector<Batch> make_batches(const Dataset& dataset, std::size_t batch_size,
                                std::optional<std::uint64_t> shuffle_seed);

// Seeded holdout split; returns (train, holdout).
std::pair<Dataset, Dataset> split_holdout(const Dataset& dataset, double holdout_fraction,
                                          std::uint64_t seed);

char parse_delimiter(std::string_view text);
std::string delimiter_name(char delimiter);

}  // namespace autodis

#endif  // AUTODIS_DATASET_H_
