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

#include "autodis/embedding.h"

#include <fmt/format.h>

#include <cmath>

#include "autodis/error.h"

namespace autodis {

double embedding_init_bound(std::size_t dim) {
  return 1.0 / std::sqrt(static_cast<double>(dim));
}

EmbeddingTable make_embedding_table(std::size_t rows, std::size_t dim, Rng& rng) {
  if (rows < 1 || dim < 1) {
    throw InvalidArgument(fmt::format("embedding table needs positive shape, got {}x{}", rows, dim));
  }
  EmbeddingTable table{Matrix(rows, dim)};
  fill_uniform(table.weights.values(), embedding_init_bound(dim), rng);
  return table;
}

std::span<const double> lookup(const EmbeddingTable& table, int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= table.rows()) {
    throw InvalidArgument(
        fmt::format("embedding index {} out of range for {} rows", index, table.rows()));
  }
  return table.weights.row(static_cast<std::size_t>(index));
}

void lookup_backward(EmbeddingTable& grad, int index, std::span<const double> upstream) {
  axpy(1.0, upstream, grad.weights.row(static_cast<std::size_t>(index)));
}

}  // namespace autodis
