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

#ifndef AUTODIS_CHECKPOINT_H_
#define AUTODIS_CHECKPOINT_H_

#include <filesystem>
#include <iosfwd>

#include "autodis/feature_context.h"
#include "autodis/model.h"

namespace autodis {

// Text manifest of named tensors:
//
//   autodis-checkpoint v1
//   schema <declaration>
//   config <key> <value>          (one per model key)
//   tensor <name> <rows> <cols>
//   <rows*cols values, row-major, shortest round-trip decimal>
//   ...
//   end
struct Checkpoint {
  Schema schema;
  ModelConfig config;
  ModelParams params;
};

void save_checkpoint(std::ostream& out, const Schema& schema, const ModelConfig& config,
                     const ModelParams& params);
void save_checkpoint(const std::filesystem::path& path, const Schema& schema,
                     const ModelConfig& config, const ModelParams& params);

// Shapes are rebuilt from the stored config and `ctx`; every tensor must be
// present with a matching shape. Throws DataError when the stored schema
// differs from ctx.schema.
Checkpoint load_checkpoint(std::istream& in, const FeatureContext& ctx);
Checkpoint load_checkpoint(const std::filesystem::path& path, const FeatureContext& ctx);

// Reads only the schema line.
Schema checkpoint_schema(const std::filesystem::path& path);

}  // namespace autodis

#endif  // AUTODIS_CHECKPOINT_H_
