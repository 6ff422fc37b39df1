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

#include "autodis/adam.h"

#include <fmt/format.h>

#include <cmath>

#include "autodis/error.h"

namespace autodis {

AdamState AdamState::for_params(const ModelParams& params, const AdamOptions& options) {
  if (!(options.lr >= 0.0)) throw InvalidArgument("learning rate must be non-negative");
  return AdamState{options, params.zeros_like(), params.zeros_like(), 0};
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state) {
  auto p = named_tensors(params);
  const auto g = named_tensors(grads);
  auto m = named_tensors(state.m);
  auto v = named_tensors(state.v);
  if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
    throw InvalidArgument("optimizer state does not match the parameter set");
  }
  for (std::size_t t = 0; t < g.size(); ++t) {
    if (g[t].values.size() != p[t].values.size()) {
      throw InvalidArgument(fmt::format("gradient shape mismatch for '{}'", p[t].name));
    }
    for (double x : g[t].values) {
      if (!std::isfinite(x)) throw DivergenceError(fmt::format("non-finite gradient in '{}'", g[t].name));
    }
  }

  ++state.step;
  const AdamOptions& o = state.options;
  const double correction1 = 1.0 - std::pow(o.beta1, static_cast<double>(state.step));
  const double correction2 = 1.0 - std::pow(o.beta2, static_cast<double>(state.step));
  for (std::size_t t = 0; t < p.size(); ++t) {
    for (std::size_t i = 0; i < p[t].values.size(); ++i) {
      const double grad = g[t].values[i];
      double& mi = m[t].values[i];
      double& vi = v[t].values[i];
      mi = o.beta1 * mi + (1.0 - o.beta1) * grad;
      vi = o.beta2 * vi + (1.0 - o.beta2) * grad * grad;
      const double m_hat = mi / correction1;
      const double v_hat = vi / correction2;
      p[t].values[i] -= o.lr * m_hat / (std::sqrt(v_hat) + o.eps);
    }
  }
  ++params.version;
}

}  // namespace autodis
