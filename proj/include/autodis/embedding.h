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

#ifndef AUTODIS_EMBEDDING_H_
#define AUTODIS_EMBEDDING_H_

#include <cstddef>
#include <span>

#include "autodis/random.h"
#include "autodis/tensor.h"

namespace autodis {

// rows x dim lookup table.
struct EmbeddingTable {
  Matrix weights;

  std::size_t rows() const { return weights.rows(); }
  std::size_t dim() const { return weights.cols(); }
};

// Entries uniform in [-1/sqrt(dim), 1/sqrt(dim)].
EmbeddingTable make_embedding_table(std::size_t rows, std::size_t dim, Rng& rng);
double embedding_init_bound(std::size_t dim);

// Row `index`; throws InvalidArgument when out of range.
std::span<const double> lookup(const EmbeddingTable& table, int index);

// Adds `upstream` into row `index` of a gradient table.
void lookup_backward(EmbeddingTable& grad, int index, std::span<const double> upstream);

}  // namespace autodis

#endif  // AUTODIS_EMBEDDING_H_
