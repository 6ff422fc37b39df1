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

#ifndef AUTODIS_RANDOM_H_
#define AUTODIS_RANDOM_H_

#include <random>
#include <span>

namespace autodis {

// Every stochastic step of a run draws from one generator of this type.
using Rng = std::mt19937_64;

inline void fill_uniform(std::span<double> values, double bound, Rng& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& v : values) v = dist(rng);
}

}  // namespace autodis

#endif  // AUTODIS_RANDOM_H_
