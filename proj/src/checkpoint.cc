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

#include "autodis/checkpoint.h"

#include <fmt/format.h>

#include <fstream>
#include <map>
#include <sstream>

#include "autodis/config.h"
#include "autodis/error.h"

namespace autodis {
namespace {

constexpr std::string_view kMagic = "autodis-checkpoint v1";

}  // namespace

void save_checkpoint(std::ostream& out, const Schema& schema, const ModelConfig& config,
                     const ModelParams& params) {
  out << kMagic << '\n';
  out << "schema " << schema.to_string() << '\n';
  for (const auto& [key, value] : model_entries(config)) {
    out << "config " << key << ' ' << value << '\n';
  }
  for (const ConstTensorRef& t : named_tensors(params)) {
    out << fmt::format("tensor {} {} {}\n", t.name, t.rows, t.cols);
    std::string line;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      if (i > 0) line += ' ';
      line += fmt::format("{}", t.values[i]);
    }
    out << line << '\n';
  }
  out << "end\n";
}

void save_checkpoint(const std::filesystem::path& path, const Schema& schema,
                     const ModelConfig& config, const ModelParams& params) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write checkpoint '{}'", path.string()));
  save_checkpoint(out, schema, config, params);
  if (!out) throw DataError(fmt::format("failed writing checkpoint '{}'", path.string()));
}

Checkpoint load_checkpoint(std::istream& in, const FeatureContext& ctx) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw DataError("not an autodis checkpoint");
  Checkpoint ckpt;
  ConfigEntries entries;
  std::map<std::string, std::pair<std::pair<std::size_t, std::size_t>, Vector>> tensors;
  bool ended = false;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "schema") {
      std::string decl;
      ss >> decl;
      ckpt.schema = Schema::parse(decl);
    } else if (tag == "config") {
      std::string key, value;
      ss >> key >> std::ws;
      std::getline(ss, value);
      entries.emplace_back(key, value);
    } else if (tag == "tensor") {
      std::string name;
      std::size_t rows = 0, cols = 0;
      ss >> name >> rows >> cols;
      std::string values_line;
      if (!ss || !std::getline(in, values_line)) {
        throw DataError(fmt::format("truncated tensor record '{}'", name));
      }
      Vector values;
      values.reserve(rows * cols);
      std::istringstream vs(values_line);
      std::string token;
      while (vs >> token) values.push_back(std::stod(token));
      if (values.size() != rows * cols) {
        throw DataError(fmt::format("tensor '{}' declares {}x{} but holds {} values", name, rows,
                                    cols, values.size()));
      }
      tensors[name] = {{rows, cols}, std::move(values)};
    } else if (tag == "end") {
      ended = true;
      break;
    } else if (!tag.empty()) {
      throw DataError(fmt::format("unexpected checkpoint record '{}'", tag));
    }
  }
  if (!ended) throw DataError("checkpoint is truncated");
  if (!(ckpt.schema == ctx.schema)) {
    throw DataError(fmt::format("checkpoint schema '{}' does not match data schema '{}'",
                                ckpt.schema.to_string(), ctx.schema.to_string()));
  }
  apply_model_entries(entries, ckpt.config);
  ckpt.params = init_params(ckpt.config, ctx, std::uint64_t{0});
  auto refs = named_tensors(ckpt.params);
  if (refs.size() != tensors.size()) {
    throw DataError(fmt::format("checkpoint holds {} tensors, model expects {}", tensors.size(),
                                refs.size()));
  }
  for (TensorRef& ref : refs) {
    auto it = tensors.find(ref.name);
    if (it == tensors.end()) throw DataError(fmt::format("checkpoint lacks tensor '{}'", ref.name));
    const auto& [shape, values] = it->second;
    if (shape.first != ref.rows || shape.second != ref.cols) {
      throw DataError(fmt::format("tensor '{}' is {}x{}, model expects {}x{}", ref.name, shape.first,
                                  shape.second, ref.rows, ref.cols));
    }
    std::copy(values.begin(), values.end(), ref.values.begin());
  }
  return ckpt;
}

Checkpoint load_checkpoint(const std::filesystem::path& path, const FeatureContext& ctx) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open checkpoint '{}'", path.string()));
  return load_checkpoint(in, ctx);
}

Schema checkpoint_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open checkpoint '{}'", path.string()));
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw DataError("not an autodis checkpoint");
  if (!std::getline(in, line) || !line.starts_with("schema ")) {
    throw DataError("checkpoint has no schema line");
  }
  return Schema::parse(line.substr(7));
}

}  // namespace autodis
