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

#include "autodis/gradcheck.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "autodis/error.h"

namespace autodis {

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

std::vector<GradCheckReport> finite_diff_check(const std::function<double()>& objective,
                                               std::span<const CheckedParam> params,
                                               double step) {
  if (!(step >= 1e-6 && step <= 1e-3)) {
    throw InvalidArgument(fmt::format("finite difference step {} outside [1e-6, 1e-3]", step));
  }
  std::vector<GradCheckReport> reports;
  reports.reserve(params.size());
  for (const CheckedParam& p : params) {
    if (p.analytic.size() != p.values.size()) {
      throw InvalidArgument(fmt::format("gradient for '{}' has {} entries, parameter has {}",
                                        p.name, p.analytic.size(), p.values.size()));
    }
    GradCheckReport report{p.name, 0.0, 0};
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      const double saved = p.values[i];
      p.values[i] = saved + step;
      const double plus = objective();
      p.values[i] = saved - step;
      const double minus = objective();
      p.values[i] = saved;
      if (!std::isfinite(plus) || !std::isfinite(minus)) {
        throw Error(fmt::format("objective not finite when probing '{}'[{}]", p.name, i));
      }
      const double numeric = (plus - minus) / (2.0 * step);
      const double err = relative_error(p.analytic[i], numeric);
      if (err > report.max_rel_error) {
        report.max_rel_error = err;
        report.worst_index = i;
      }
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace autodis
