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

#ifndef AUTODIS_SCHEMA_H_
#define AUTODIS_SCHEMA_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace autodis {

enum class FieldKind { kCategorical, kNumerical };

// How categorical cell strings become table indices.
enum class CategoricalMode {
  kDictionary,  // first-seen order on the training split, index 0 reserved for unknown
  kHash,        // FNV-1a 64 of the token, modulo vocab size
};

struct FieldSchema {
  int field_id = 0;
  FieldKind kind = FieldKind::kNumerical;
  int vocab_size = 0;  // categorical only

  bool operator==(const FieldSchema&) const = default;
};

// Ordered field declaration of a dataset. Field ids are 0..n-1 in column
// order; each field also has a "slot", its index among fields of its kind.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<FieldSchema> fields);

  // Parses "cat:5,num,num" (also accepts "c:5" and "n").
  static Schema parse(std::string_view declaration);
  std::string to_string() const;

  const std::vector<FieldSchema>& fields() const { return fields_; }
  const FieldSchema& field(int field_id) const;
  std::size_t num_fields() const { return fields_.size(); }
  std::size_t num_categorical() const { return categorical_.size(); }
  std::size_t num_numerical() const { return numerical_.size(); }

  std::size_t slot(int field_id) const;
  int categorical_field(std::size_t slot) const { return categorical_[slot]; }
  int numerical_field(std::size_t slot) const { return numerical_[slot]; }
  int vocab_size(std::size_t categorical_slot) const {
    return fields_[categorical_[categorical_slot]].vocab_size;
  }

  bool operator==(const Schema& other) const { return fields_ == other.fields_; }

 private:
  std::vector<FieldSchema> fields_;
  std::vector<int> categorical_;
  std::vector<int> numerical_;
  std::vector<std::size_t> slots_;
};

std::string_view to_string(CategoricalMode mode);
CategoricalMode parse_categorical_mode(std::string_view text);

}  // namespace autodis

#endif  // AUTODIS_SCHEMA_H_
