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

#ifndef AUTODIS_ENCODERS_H_
#define AUTODIS_ENCODERS_H_

#include <span>
#include <vector>

#include "autodis/random.h"
#include "autodis/tensor.h"

namespace autodis {

// [x^2, x, sqrt(x)] of a normalized value.
Vector youtube_encode(double x_norm);

// x * e. The gradients are x * upstream for e and <e, upstream> for x.
Vector field_embed(double x_norm, std::span<const double> field_embedding);

struct DenseLayer {
  Matrix weight;
  Vector bias;
};

// Stack of affine layers with Leaky-ReLU between them and a linear output.
struct Mlp {
  std::vector<DenseLayer> layers;

  // widths = {input, hidden..., output}; Glorot-uniform weights, zero biases.
  static Mlp create(std::span<const int> widths, Rng& rng);
  Mlp zeros_like() const;

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().weight.cols(); }
  std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().weight.rows(); }
};

struct MlpCache {
  std::vector<Vector> inputs;  // input of each layer
  std::vector<Vector> pre;     // pre-activation of each layer
};

Vector mlp_forward(const Mlp& mlp, std::span<const double> x, double slope, MlpCache* cache);

// Accumulates parameter gradients into `grads` and writes dL/dx into `d_input`
// when it is non-null.
void mlp_backward(const Mlp& mlp, const MlpCache& cache, std::span<const double> upstream,
                  double slope, Mlp* grads, Vector* d_input);

// The shared numerical-field representation N -> ... -> d.
inline Vector dlrm_encode(std::span<const double> x_all, const Mlp& mlp, double slope) {
  return mlp_forward(mlp, x_all, slope, nullptr);
}

}  // namespace autodis

#endif  // AUTODIS_ENCODERS_H_
