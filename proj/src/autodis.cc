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

#include "autodis/autodis.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "autodis/embedding.h"
#include "autodis/error.h"
#include "autodis/ops.h"

namespace autodis {

MetaEmbeddings make_meta_embeddings(std::size_t buckets, std::size_t dim, Rng& rng) {
  return MetaEmbeddings{make_embedding_table(buckets, dim, rng).weights};
}

AutoDisNet make_autodis_net(std::size_t buckets, double alpha, double slope, bool with_bias,
                            Rng& rng) {
  if (buckets < 1) throw InvalidArgument("AutoDis needs at least one bucket");
  if (alpha < 0.0 || alpha > 1.0) {
    throw InvalidArgument(fmt::format("skip factor alpha {} outside [0, 1]", alpha));
  }
  AutoDisNet net;
  net.w.resize(buckets);
  fill_uniform(net.w, 1.0, rng);
  net.W = Matrix(buckets, buckets);
  fill_uniform(net.W.values(), 1.0 / std::sqrt(static_cast<double>(buckets)), rng);
  if (with_bias) {
    net.bias_in.resize(buckets);
    fill_uniform(net.bias_in, 1.0, rng);
    net.bias_out.assign(buckets, 0.0);
  }
  net.alpha = alpha;
  net.slope = slope;
  return net;
}

TemperatureNet make_temperature_net(std::size_t stats_len, std::size_t hidden, double tau,
                                    double epsilon, double slope, Rng& rng) {
  if (!(tau > 0.0) || !(epsilon > 0.0) || !(epsilon < tau)) {
    throw InvalidArgument(
        fmt::format("temperature needs 0 < epsilon < tau, got tau={} epsilon={}", tau, epsilon));
  }
  TemperatureNet tnet;
  tnet.tau = tau;
  tnet.epsilon = epsilon;
  tnet.slope = slope;
  if (hidden > 0) {
    tnet.W1 = Matrix(hidden, stats_len + 1);
    fill_uniform(tnet.W1.values(), std::sqrt(6.0 / static_cast<double>(hidden + stats_len + 1)),
                 rng);
    tnet.W2 = Matrix(1, hidden);
    fill_uniform(tnet.W2.values(), std::sqrt(6.0 / static_cast<double>(hidden + 1)), rng);
  }
  return tnet;
}

Vector project(double x_norm, const AutoDisNet& net, ProjectCache* cache) {
  const std::size_t n = net.buckets();
  if (net.W.rows() != n || net.W.cols() != n) {
    throw InvalidArgument(fmt::format("AutoDis projection has {} buckets but W is {}", n,
                                      net.W.shape_string()));
  }
  Vector pre(n);
  for (std::size_t i = 0; i < n; ++i) {
    pre[i] = net.w[i] * x_norm + (net.bias_in.empty() ? 0.0 : net.bias_in[i]);
  }
  Vector h = leaky_relu(pre, net.slope);
  Vector logits = affine(net.W, h, net.bias_out);
  axpy(net.alpha, h, logits);
  if (cache != nullptr) {
    cache->x = x_norm;
    cache->pre = std::move(pre);
    cache->h = std::move(h);
  }
  return logits;
}

double project_backward(const AutoDisNet& net, const ProjectCache& cache,
                        std::span<const double> d_logits, AutoDisNet* grads) {
  Vector d_h;
  affine_backward(net.W, cache.h, d_logits, grads ? &grads->W : nullptr,
                  grads ? std::span<double>(grads->bias_out) : std::span<double>(), &d_h);
  double d_x = 0.0;
  for (std::size_t i = 0; i < d_h.size(); ++i) {
    const double d_pre = (d_h[i] + net.alpha * d_logits[i]) * leaky_relu_grad(cache.pre[i], net.slope);
    if (grads != nullptr) {
      grads->w[i] += d_pre * cache.x;
      if (!grads->bias_in.empty()) grads->bias_in[i] += d_pre;
    }
    d_x += d_pre * net.w[i];
  }
  return d_x;
}

double adaptive_tau(double x_norm, std::span<const double> stats_vec, const TemperatureNet& tnet,
                    TauCache* cache) {
  if (!tnet.adaptive()) return tnet.tau;
  Vector input(stats_vec.begin(), stats_vec.end());
  input.push_back(x_norm);
  Vector pre = affine(tnet.W1, input);
  Vector hidden = leaky_relu(pre, tnet.slope);
  const double s = sigmoid(dot(tnet.W2.row(0), hidden));
  if (cache != nullptr) {
    cache->input = std::move(input);
    cache->pre = std::move(pre);
    cache->hidden = std::move(hidden);
    cache->s = s;
  }
  return (tnet.tau - tnet.epsilon) + 2.0 * tnet.epsilon * s;
}

double adaptive_tau_backward(const TemperatureNet& tnet, const TauCache& cache, double d_tau,
                             TemperatureNet* grads) {
  if (!tnet.adaptive()) return 0.0;
  const double d_z = d_tau * 2.0 * tnet.epsilon * sigmoid_grad_from_output(cache.s);
  if (grads != nullptr) axpy(d_z, cache.hidden, grads->W2.row(0));
  Vector d_pre(cache.pre.size());
  for (std::size_t i = 0; i < d_pre.size(); ++i) {
    d_pre[i] = d_z * tnet.W2(0, i) * leaky_relu_grad(cache.pre[i], tnet.slope);
  }
  Vector d_input;
  affine_backward(tnet.W1, cache.input, d_pre, grads ? &grads->W1 : nullptr, {}, &d_input);
  // Only the trailing entry of the input is the value; the statistics are data.
  return d_input.back();
}

Vector soft_discretize(std::span<const double> logits, double tau_x) {
  // Overflowed parameters show up here first during training.
  if (std::isnan(tau_x)) throw DivergenceError("non-finite temperature");
  return softmax_temperature(logits, tau_x);
}

std::vector<int> top_k_indices(std::span<const double> probs, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > probs.size()) {
    throw InvalidArgument(fmt::format("top-k with K={} over {} buckets", k, probs.size()));
  }
  std::vector<int> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return probs[a] > probs[b]; });
  order.resize(k);
  return order;
}

Vector aggregate(std::span<const double> probs, const MetaEmbeddings& me,
                 const Aggregation& aggregation, std::vector<int>* selected) {
  if (probs.size() != me.buckets()) {
    throw InvalidArgument(fmt::format("{} probabilities for {} meta-embeddings", probs.size(),
                                      me.buckets()));
  }
  Vector out(me.dim(), 0.0);
  switch (aggregation.kind) {
    case AggregationKind::kWeightedAverage:
      for (std::size_t h = 0; h < probs.size(); ++h) axpy(probs[h], me.weights.row(h), out);
      if (selected != nullptr) selected->clear();
      break;
    case AggregationKind::kMaxPooling:
    case AggregationKind::kTopKSum: {
      const int k = aggregation.kind == AggregationKind::kMaxPooling ? 1 : aggregation.top_k;
      std::vector<int> rows = top_k_indices(probs, k);
      for (int r : rows) axpy(1.0, me.weights.row(r), out);
      if (selected != nullptr) *selected = std::move(rows);
      break;
    }
  }
  return out;
}

Vector aggregate_backward(std::span<const double> probs, const MetaEmbeddings& me,
                          const Aggregation& aggregation, std::span<const int> selected,
                          std::span<const double> upstream, MetaEmbeddings* grad) {
  Vector d_probs(probs.size(), 0.0);
  if (aggregation.kind == AggregationKind::kWeightedAverage) {
    for (std::size_t h = 0; h < probs.size(); ++h) {
      if (grad != nullptr) axpy(probs[h], upstream, grad->weights.row(h));
      d_probs[h] = dot(me.weights.row(h), upstream);
    }
  } else if (grad != nullptr) {
    for (int r : selected) axpy(1.0, upstream, grad->weights.row(r));
  }
  return d_probs;
}

Vector embed_numeric(double x_norm, const AutoDisNet& net, const TemperatureNet& tnet,
                     const MetaEmbeddings& me, const Aggregation& aggregation,
                     std::span<const double> stats_vec, EmbedCache* cache) {
  if (cache == nullptr) {
    const Vector logits = project(x_norm, net);
    const Vector probs = soft_discretize(logits, adaptive_tau(x_norm, stats_vec, tnet));
    return aggregate(probs, me, aggregation);
  }
  cache->logits = project(x_norm, net, &cache->project);
  cache->tau_x = adaptive_tau(x_norm, stats_vec, tnet, &cache->tau);
  cache->probs = soft_discretize(cache->logits, cache->tau_x);
  return aggregate(cache->probs, me, aggregation, &cache->selected);
}

double embed_numeric_backward(const AutoDisNet& net, const TemperatureNet& tnet,
                              const MetaEmbeddings& me, const Aggregation& aggregation,
                              const EmbedCache& cache, std::span<const double> upstream,
                              const AutoDisGrads& grads) {
  const Vector d_probs =
      aggregate_backward(cache.probs, me, aggregation, cache.selected, upstream, grads.me);
  if (aggregation.kind != AggregationKind::kWeightedAverage) return 0.0;
  const SoftmaxGrad sg = softmax_temperature_backward(cache.probs, cache.logits, cache.tau_x, d_probs);
  double d_x = project_backward(net, cache.project, sg.d_logits, grads.net);
  d_x += adaptive_tau_backward(tnet, cache.tau, sg.d_tau, grads.tnet);
  return d_x;
}

std::string_view to_string(AggregationKind kind) {
  switch (kind) {
    case AggregationKind::kMaxPooling:
      return "max_pooling";
    case AggregationKind::kTopKSum:
      return "top_k_sum";
    case AggregationKind::kWeightedAverage:
      return "weighted_average";
  }
  return "weighted_average";
}

AggregationKind parse_aggregation_kind(std::string_view text) {
  if (text == "max_pooling") return AggregationKind::kMaxPooling;
  if (text == "top_k_sum") return AggregationKind::kTopKSum;
  if (text == "weighted_average") return AggregationKind::kWeightedAverage;
  throw InvalidArgument(fmt::format("unknown aggregation '{}'", text));
}

}  // namespace autodis
