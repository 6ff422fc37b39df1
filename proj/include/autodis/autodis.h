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

#ifndef AUTODIS_AUTODIS_H_
#define AUTODIS_AUTODIS_H_

#include <span>
#include <string_view>
#include <vector>

#include "autodis/random.h"
#include "autodis/tensor.h"

namespace autodis {

// Automatic discretization of a numerical field into soft bucket
// probabilities, followed by aggregation of the field's meta-embeddings.
//
//   h      = LeakyReLU(w x (+ b_in))
//   logits = W h (+ b_out) + alpha h
//   tau_x  = (tau - eps) + 2 eps sigmoid(W2 LeakyReLU(W1 [stats || x]))
//   probs  = softmax(logits / tau_x)
//   e      = aggregate(probs, ME)

enum class AggregationKind { kMaxPooling, kTopKSum, kWeightedAverage };

struct Aggregation {
  AggregationKind kind = AggregationKind::kWeightedAverage;
  int top_k = 1;  // used by kTopKSum
};

// H x d matrix of meta-embeddings shared by all values of one field.
struct MetaEmbeddings {
  Matrix weights;

  std::size_t buckets() const { return weights.rows(); }
  std::size_t dim() const { return weights.cols(); }
};

struct AutoDisNet {
  Vector w;  // length H
  Matrix W;  // H x H
  // Optional biases; empty when disabled.
  Vector bias_in;
  Vector bias_out;
  double alpha = 0.2;
  double slope = 0.01;

  std::size_t buckets() const { return w.size(); }
};

// Predicts a per-value temperature from the field statistics and the value.
// With empty weights the network is disabled and the global `tau` is used.
struct TemperatureNet {
  Matrix W1;  // hidden x (S + 1)
  Matrix W2;  // 1 x hidden
  double tau = 1e-3;
  double epsilon = 5e-4;
  double slope = 0.01;

  bool adaptive() const { return W1.size() > 0; }
};

MetaEmbeddings make_meta_embeddings(std::size_t buckets, std::size_t dim, Rng& rng);
AutoDisNet make_autodis_net(std::size_t buckets, double alpha, double slope, bool with_bias,
                            Rng& rng);
// hidden == 0 builds a fixed-temperature (non-adaptive) net.
TemperatureNet make_temperature_net(std::size_t stats_len, std::size_t hidden, double tau,
                                    double epsilon, double slope, Rng& rng);

struct ProjectCache {
  double x = 0.0;
  Vector pre;
  Vector h;
};

Vector project(double x_norm, const AutoDisNet& net, ProjectCache* cache = nullptr);
// Accumulates parameter gradients into `grads` (may be null); returns dL/dx.
double project_backward(const AutoDisNet& net, const ProjectCache& cache,
                        std::span<const double> d_logits, AutoDisNet* grads);

struct TauCache {
  Vector input;
  Vector pre;
  Vector hidden;
  double s = 0.5;
};

double adaptive_tau(double x_norm, std::span<const double> stats_vec, const TemperatureNet& tnet,
                    TauCache* cache = nullptr);
// Returns dL/dx; accumulates into `grads` (may be null).
double adaptive_tau_backward(const TemperatureNet& tnet, const TauCache& cache, double d_tau,
                             TemperatureNet* grads);

// softmax(logits / tau_x).
Vector soft_discretize(std::span<const double> logits, double tau_x);

// Indices of the k largest probabilities, descending, ties to the lowest index.
std::vector<int> top_k_indices(std::span<const double> probs, int k);

// `selected`, when non-null, receives the rows chosen by the hard modes.
Vector aggregate(std::span<const double> probs, const MetaEmbeddings& me,
                 const Aggregation& aggregation, std::vector<int>* selected = nullptr);

// Accumulates dL/dME into `grad` (may be null) and returns dL/dprobs, which is
// zero for the hard selection modes.
Vector aggregate_backward(std::span<const double> probs, const MetaEmbeddings& me,
                          const Aggregation& aggregation, std::span<const int> selected,
                          std::span<const double> upstream, MetaEmbeddings* grad);

struct EmbedCache {
  ProjectCache project;
  TauCache tau;
  Vector logits;
  double tau_x = 0.0;
  Vector probs;
  std::vector<int> selected;
};

// Full per-field encoder: project -> adaptive_tau -> soft_discretize -> aggregate.
Vector embed_numeric(double x_norm, const AutoDisNet& net, const TemperatureNet& tnet,
                     const MetaEmbeddings& me, const Aggregation& aggregation,
                     std::span<const double> stats_vec, EmbedCache* cache = nullptr);

struct AutoDisGrads {
  AutoDisNet* net = nullptr;
  TemperatureNet* tnet = nullptr;
  MetaEmbeddings* me = nullptr;
};

// Returns dL/dx_norm.
double embed_numeric_backward(const AutoDisNet& net, const TemperatureNet& tnet,
                              const MetaEmbeddings& me, const Aggregation& aggregation,
                              const EmbedCache& cache, std::span<const double> upstream,
                              const AutoDisGrads& grads);

std::string_view to_string(AggregationKind kind);
AggregationKind parse_aggregation_kind(std::string_view text);

}  // namespace autodis

#endif  // AUTODIS_AUTODIS_H_
