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

#ifndef AUTODIS_METRICS_H_
#define AUTODIS_METRICS_H_

#include <span>

namespace autodis {

// Mann-Whitney AUC with half credit for ties, via average ranks.
// Throws InvalidArgument when only one class is present.
double auc(std::span<const double> scores, std::span<const double> labels);

// Same definition as the training loss with lambda = 0.
double logloss_metric(std::span<const double> scores, std::span<const double> labels);

}  // namespace autodis

#endif  // AUTODIS_METRICS_H_
