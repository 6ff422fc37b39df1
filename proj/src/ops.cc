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

#include "autodis/ops.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "autodis/error.h"

namespace autodis {

Vector affine(const Matrix& weight, std::span<const double> x,
              std::span<const double> bias) {
  if (weight.cols() != x.size()) {
    throw InvalidArgument(fmt::format("affine: weight is {} but input has length {}",
                                      weight.shape_string(), x.size()));
  }
  if (!bias.empty() && bias.size() != weight.rows()) {
    throw InvalidArgument(fmt::format("affine: weight is {} but bias has length {}",
                                      weight.shape_string(), bias.size()));
  }
  Vector out(weight.rows());
  for (std::size_t r = 0; r < weight.rows(); ++r) {
    out[r] = dot(weight.row(r), x) + (bias.empty() ? 0.0 : bias[r]);
  }
  return out;
}

void affine_backward(const Matrix& weight, std::span<const double> x,
                     std::span<const double> delta, Matrix* d_weight,
                     std::span<double> d_bias, Vector* d_x) {
  if (d_weight != nullptr) {
    for (std::size_t r = 0; r < weight.rows(); ++r) {
      if (delta[r] != 0.0) axpy(delta[r], x, d_weight->row(r));
    }
  }
  if (!d_bias.empty()) {
    for (std::size_t r = 0; r < weight.rows(); ++r) d_bias[r] += delta[r];
  }
  if (d_x != nullptr) {
    d_x->assign(weight.cols(), 0.0);
    for (std::size_t r = 0; r < weight.rows(); ++r) {
      if (delta[r] != 0.0) axpy(delta[r], weight.row(r), *d_x);
    }
  }
}

Vector leaky_relu(std::span<const double> x, double slope) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : slope * x[i];
  return out;
}

Vector softmax_temperature(std::span<const double> logits, double tau) {
  if (!(tau > 0.0)) {
    throw InvalidArgument(fmt::format("softmax temperature must be positive, got {}", tau));
  }
  Vector out(logits.size());
  if (logits.empty()) return out;
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp((logits[i] - peak) / tau);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

SoftmaxGrad softmax_temperature_backward(std::span<const double> out,
                                         std::span<const double> logits, double tau,
                                         std::span<const double> upstream) {
  const double p_dot_g = dot(out, upstream);
  const double p_dot_z = dot(out, logits);
  SoftmaxGrad grad;
  grad.d_logits.resize(out.size());
  for (std::size_t h = 0; h < out.size(); ++h) {
    grad.d_logits[h] = out[h] * (upstream[h] - p_dot_g) / tau;
    grad.d_tau += upstream[h] * out[h] * (p_dot_z - logits[h]);
  }
  grad.d_tau /= tau * tau;
  return grad;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace autodis
