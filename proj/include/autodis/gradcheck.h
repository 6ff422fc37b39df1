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

#ifndef AUTODIS_GRADCHECK_H_
#define AUTODIS_GRADCHECK_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace autodis {

struct GradCheckReport {
  std::string parameter_name;
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
};

// A parameter tensor the checker may perturb in place, paired with the
// analytic gradient computed at the unperturbed point.
struct CheckedParam {
  std::string name;
  std::span<double> values;
  std::span<const double> analytic;
};

// Central-difference check of `analytic` against `objective`, which must read
// the current contents of every `values` span. Each entry is restored after
// probing. Relative error is |a - n| / max(1e-8, |a| + |n|).
std::vector<GradCheckReport> finite_diff_check(const std::function<double()>& objective,
                                               std::span<const CheckedParam> params,
                                               double step);

double relative_error(double analytic, double numeric);

}  // namespace autodis

#endif  // AUTODIS_GRADCHECK_H_
