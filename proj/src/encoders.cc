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

#include "autodis/encoders.h"

#include <fmt/format.h>

#include <cmath>

#include "autodis/error.h"
#include "autodis/ops.h"

namespace autodis {

Vector youtube_encode(double x_norm) { return {x_norm * x_norm, x_norm, std::sqrt(x_norm)}; }

Vector field_embed(double x_norm, std::span<const double> field_embedding) {
  Vector out(field_embedding.begin(), field_embedding.end());
  for (double& v : out) v *= x_norm;
  return out;
}

Mlp Mlp::create(std::span<const int> widths, Rng& rng) {
  if (widths.size() < 2) throw InvalidArgument("an MLP needs at least input and output widths");
  Mlp mlp;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const int in = widths[i];
    const int out = widths[i + 1];
    if (in < 0 || out < 1) {
      throw InvalidArgument(fmt::format("bad MLP layer {} -> {}", in, out));
    }
    DenseLayer layer{Matrix(out, in), Vector(out, 0.0)};
    fill_uniform(layer.weight.values(), std::sqrt(6.0 / (in + out)), rng);
    mlp.layers.push_back(std::move(layer));
  }
  return mlp;
}

Mlp Mlp::zeros_like() const {
  Mlp out;
  for (const DenseLayer& l : layers) {
    out.layers.push_back({Matrix(l.weight.rows(), l.weight.cols()), Vector(l.bias.size(), 0.0)});
  }
  return out;
}

Vector mlp_forward(const Mlp& mlp, std::span<const double> x, double slope, MlpCache* cache) {
  if (x.size() != mlp.input_dim()) {
    throw InvalidArgument(
        fmt::format("MLP expects input of length {}, got {}", mlp.input_dim(), x.size()));
  }
  if (cache != nullptr) {
    cache->inputs.clear();
    cache->pre.clear();
  }
  Vector current(x.begin(), x.end());
  for (std::size_t i = 0; i < mlp.layers.size(); ++i) {
    Vector pre = affine(mlp.layers[i].weight, current, mlp.layers[i].bias);
    Vector next = i + 1 < mlp.layers.size() ? leaky_relu(pre, slope) : pre;
    if (cache != nullptr) {
      cache->inputs.push_back(std::move(current));
      cache->pre.push_back(std::move(pre));
    }
    current = std::move(next);
  }
  return current;
}

void mlp_backward(const Mlp& mlp, const MlpCache& cache, std::span<const double> upstream,
                  double slope, Mlp* grads, Vector* d_input) {
  Vector delta(upstream.begin(), upstream.end());
  for (std::size_t i = mlp.layers.size(); i-- > 0;) {
    if (i + 1 < mlp.layers.size()) {
      for (std::size_t r = 0; r < delta.size(); ++r) delta[r] *= leaky_relu_grad(cache.pre[i][r], slope);
    }
    const bool need_dx = i > 0 || d_input != nullptr;
    Vector dx;
    affine_backward(mlp.layers[i].weight, cache.inputs[i], delta,
                    grads ? &grads->layers[i].weight : nullptr,
                    grads ? std::span<double>(grads->layers[i].bias) : std::span<double>(),
                    need_dx ? &dx : nullptr);
    delta = std::move(dx);
  }
  if (d_input != nullptr) *d_input = std::move(delta);
}

}  // namespace autodis
