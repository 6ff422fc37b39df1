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

#ifndef AUTODIS_ADAM_H_
#define AUTODIS_ADAM_H_

#include <cstdint>

#include "autodis/model.h"

namespace autodis {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamOptions options;
  ModelParams m;  // first moments
  ModelParams v;  // second moments
  std::uint64_t step = 0;

  static AdamState for_params(const ModelParams& params, const AdamOptions& options);
};

// Bias-corrected Adam update of every tensor. Throws DivergenceError naming
// the tensor when a gradient entry is not finite; parameters are untouched
// in that case.
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state);

}  // namespace autodis

#endif  // AUTODIS_ADAM_H_
