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

#ifndef AUTODIS_CONFIG_H_
#define AUTODIS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "autodis/model.h"
#include "autodis/schema.h"
#include "autodis/synthetic.h"
#include "autodis/trainer.h"

namespace autodis {

struct DataConfig {
  std::string train;
  std::string valid;
  std::string test;
  std::string schema;
  char delimiter = '\t';
  CategoricalMode categorical_mode = CategoricalMode::kDictionary;
  // Holdout fraction of the training file used when no validation file is set.
  double valid_fraction = 0.1;
};

struct RunConfig {
  DataConfig data;
  ModelConfig model;
  TrainConfig train;
  SyntheticSpec synth;
  std::uint64_t synth_seed = 7;
  std::string output_dir = "out";
};

// Ordered key/value pairs in "section.key" form.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// Reads "section.key = value" lines; '#' starts a comment.
ConfigEntries parse_config_text(std::istream& in);
ConfigEntries read_config_file(const std::filesystem::path& path);

// Applies entries over the defaults. Unknown keys and unparsable values throw
// ConfigError naming the key.
RunConfig resolve_config(const ConfigEntries& entries);

// Every known key with its resolved value, in a fixed order.
ConfigEntries config_entries(const RunConfig& config);
std::string render_config(const ConfigEntries& entries);

// Only the model-shaping keys (model.*, autodis.*, hard.*).
ConfigEntries model_entries(const ModelConfig& model);
void apply_model_entries(const ConfigEntries& entries, ModelConfig& model);

bool is_known_key(const std::string& key);

}  // namespace autodis

#endif  // AUTODIS_CONFIG_H_
