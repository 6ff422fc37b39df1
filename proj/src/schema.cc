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

#include "autodis/schema.h"

#include <fmt/format.h>

#include <charconv>

#include "autodis/error.h"

namespace autodis {

Schema::Schema(std::vector<FieldSchema> fields) : fields_(std::move(fields)) {
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    const FieldSchema& f = fields_[i];
    if (f.field_id != static_cast<int>(i)) {
      throw InvalidArgument(
          fmt::format("field ids must be contiguous from 0; position {} has id {}", i,
                      f.field_id));
    }
    if (f.kind == FieldKind::kCategorical) {
      if (f.vocab_size < 1) {
        throw InvalidArgument(fmt::format("categorical field {} needs vocab_size >= 1", i));
      }
      slots_.push_back(categorical_.size());
      categorical_.push_back(f.field_id);
    } else {
      slots_.push_back(numerical_.size());
      numerical_.push_back(f.field_id);
    }
  }
}

Schema Schema::parse(std::string_view declaration) {
  std::vector<FieldSchema> fields;
  std::size_t start = 0;
  while (start <= declaration.size()) {
    std::size_t end = declaration.find(',', start);
    if (end == std::string_view::npos) end = declaration.size();
    std::string_view item = declaration.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    FieldSchema f;
    f.field_id = static_cast<int>(fields.size());
    if (item == "num" || item == "n") {
      f.kind = FieldKind::kNumerical;
    } else if (item.starts_with("cat:") || item.starts_with("c:")) {
      std::string_view count = item.substr(item.find(':') + 1);
      int vocab = 0;
      auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), vocab);
      if (ec != std::errc() || ptr != count.data() + count.size() || vocab < 1) {
        throw InvalidArgument(fmt::format("bad vocabulary size in schema item '{}'", item));
      }
      f.kind = FieldKind::kCategorical;
      f.vocab_size = vocab;
    } else {
      throw InvalidArgument(fmt::format("bad schema item '{}'", item));
    }
    fields.push_back(f);
    start = end + 1;
  }
  if (fields.empty()) throw InvalidArgument("schema declares no fields");
  return Schema(std::move(fields));
}

std::string Schema::to_string() const {
  std::string out;
  for (const FieldSchema& f : fields_) {
    if (!out.empty()) out += ',';
    out += f.kind == FieldKind::kCategorical ? fmt::format("cat:{}", f.vocab_size) : "num";
  }
  return out;
}

const FieldSchema& Schema::field(int field_id) const {
  if (field_id < 0 || static_cast<std::size_t>(field_id) >= fields_.size()) {
    throw InvalidArgument(fmt::format("unknown field id {}", field_id));
  }
  return fields_[field_id];
}

std::size_t Schema::slot(int field_id) const {
  field(field_id);
  return slots_[field_id];
}

std::string_view to_string(CategoricalMode mode) {
  return mode == CategoricalMode::kHash ? "hash" : "dictionary";
}

CategoricalMode parse_categorical_mode(std::string_view text) {
  if (text == "dictionary") return CategoricalMode::kDictionary;
  if (text == "hash") return CategoricalMode::kHash;
  throw InvalidArgument(fmt::format("unknown categorical mode '{}'", text));
}

}  // namespace autodis
