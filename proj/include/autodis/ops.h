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

#ifndef AUTODIS_OPS_H_
#define AUTODIS_OPS_H_

#include <span>

#include "autodis/tensor.h"

namespace autodis {

inline constexpr double kDefaultLeakySlope = 0.01;

// out = W x (+ b). An empty `bias` means no bias term.
Vector affine(const Matrix& weight, std::span<const double> x,
              std::span<const double> bias = {});

// Reverse pass of `affine` for upstream gradient `delta` (length W.rows).
// Accumulates into `d_weight` / `d_bias` when non-null and writes W^T delta
// into `d_x` when non-null.
void affine_backward(const Matrix& weight, std::span<const double> x,
                     std::span<const double> delta, Matrix* d_weight,
                     std::span<double> d_bias, Vector* d_x);

// Elementwise x if x > 0 else slope * x.
Vector leaky_relu(std::span<const double> x, double slope);

// Derivative of leaky_relu; the kink at exactly 0 takes the negative-side slope.
inline double leaky_relu_grad(double x, double slope) { return x > 0.0 ? 1.0 : slope; }

// softmax(logits / tau), max-subtracted.
Vector softmax_temperature(std::span<const double> logits, double tau);

struct SoftmaxGrad {
  Vector d_logits;
  double d_tau = 0.0;
};

// Given out = softmax_temperature(logits, tau) and dL/dout, returns dL/dlogits
// and dL/dtau.
SoftmaxGrad softmax_temperature_backward(std::span<const double> out,
                                         std::span<const double> logits, double tau,
                                         std::span<const double> upstream);

double sigmoid(double x);

// s(1-s) expressed through the forward output s.
inline double sigmoid_grad_from_output(double s) { return s * (1.0 - s); }

}  // namespace autodis

#endif  // AUTODIS_OPS_H_
