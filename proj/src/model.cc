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

#include "autodis/model.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "autodis/error.h"
#include "autodis/ops.h"

namespace autodis {
namespace {

template <class Ref, class Params>
std::vector<Ref> collect(Params& p) {
  std::vector<Ref> out;
  auto add_matrix = [&](std::string name, auto& m, bool reg) {
    out.push_back(Ref{std::move(name), m.values(), m.rows(), m.cols(), reg});
  };
  auto add_vector = [&](std::string name, auto& v, bool reg) {
    if (v.empty()) return;
    out.push_back(Ref{std::move(name), std::span(v), 1, v.size(), reg});
  };
  auto add_mlp = [&](std::string_view prefix, auto& mlp) {
    for (std::size_t i = 0; i < mlp.layers.size(); ++i) {
      add_matrix(fmt::format("{}.{}.weight", prefix, i), mlp.layers[i].weight, true);
      add_vector(fmt::format("{}.{}.bias", prefix, i), mlp.layers[i].bias, false);
    }
  };
  for (std::size_t i = 0; i < p.categorical.size(); ++i) {
    add_matrix(fmt::format("categorical.{}", i), p.categorical[i].weights, true);
  }
  for (std::size_t k = 0; k < p.autodis.size(); ++k) {
    auto& f = p.autodis[k];
    add_matrix(fmt::format("autodis.{}.me", k), f.me.weights, true);
    add_vector(fmt::format("autodis.{}.w", k), f.net.w, true);
    add_matrix(fmt::format("autodis.{}.W", k), f.net.W, true);
    add_vector(fmt::format("autodis.{}.bias_in", k), f.net.bias_in, false);
    add_vector(fmt::format("autodis.{}.bias_out", k), f.net.bias_out, false);
  }
  for (std::size_t k = 0; k < p.temperature.size(); ++k) {
    auto& t = p.temperature[k];
    if (!t.adaptive()) continue;
    add_matrix(fmt::format("temperature.{}.W1", k), t.W1, true);
    add_matrix(fmt::format("temperature.{}.W2", k), t.W2, true);
  }
  for (std::size_t k = 0; k < p.field_embeddings.size(); ++k) {
    add_matrix(fmt::format("field_embedding.{}", k), p.field_embeddings[k], true);
  }
  for (std::size_t k = 0; k < p.bucket_tables.size(); ++k) {
    add_matrix(fmt::format("bucket.{}", k), p.bucket_tables[k].weights, true);
  }
  add_mlp("dlrm", p.dlrm);
  add_mlp("tower", p.tower);
  return out;
}

std::size_t numeric_embedding_count(const ModelConfig& config, std::size_t active) {
  switch (config.encoder) {
    case NumericEncoder::kAutoDis:
    case NumericEncoder::kFieldEmbedding:
    case NumericEncoder::kHard:
      return active;
    case NumericEncoder::kDlrm:
      return active > 0 ? 1 : 0;
    case NumericEncoder::kYouTube:
      return 0;
  }
  return 0;
}

const TemperatureNet& temperature_for(const ModelParams& p, std::size_t k) {
  return p.temperature.size() == 1 ? p.temperature[0] : p.temperature[k];
}

void check_batch(const Batch& batch, const FeatureContext& ctx) {
  if (batch.num_categorical != ctx.schema.num_categorical() ||
      batch.num_numerical != ctx.schema.num_numerical()) {
    throw InvalidArgument(fmt::format(
        "batch has {} categorical / {} numerical fields, model schema has {} / {}",
        batch.num_categorical, batch.num_numerical, ctx.schema.num_categorical(),
        ctx.schema.num_numerical()));
  }
}

}  // namespace

std::vector<std::size_t> active_numeric_slots(const ModelConfig& config, const Schema& schema) {
  std::vector<std::size_t> slots;
  if (!config.numeric_fields) {
    for (std::size_t j = 0; j < schema.num_numerical(); ++j) slots.push_back(j);
    return slots;
  }
  for (int id : *config.numeric_fields) {
    if (id < 0 || static_cast<std::size_t>(id) >= schema.num_fields() ||
        schema.field(id).kind != FieldKind::kNumerical) {
      throw InvalidArgument(fmt::format("field {} is not a numerical field of the schema", id));
    }
    const std::size_t slot = schema.slot(id);
    if (std::find(slots.begin(), slots.end(), slot) != slots.end()) {
      throw InvalidArgument(fmt::format("numerical field {} listed twice", id));
    }
    slots.push_back(slot);
  }
  return slots;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams out = *this;
  for (TensorRef& t : named_tensors(out)) std::fill(t.values.begin(), t.values.end(), 0.0);
  out.version = 0;
  return out;
}

std::vector<TensorRef> named_tensors(ModelParams& params) {
  return collect<TensorRef>(params);
}

std::vector<ConstTensorRef> named_tensors(const ModelParams& params) {
  return collect<ConstTensorRef>(params);
}

std::size_t parameter_count(const ModelParams& params) {
  std::size_t n = 0;
  for (const ConstTensorRef& t : named_tensors(params)) n += t.values.size();
  return n;
}

std::size_t tower_input_dim(const ModelConfig& config, const Schema& schema) {
  const std::size_t active = active_numeric_slots(config, schema).size();
  const auto d = static_cast<std::size_t>(config.embed_dim);
  std::size_t width = schema.num_categorical() * d + numeric_embedding_count(config, active) * d;
  if (config.encoder == NumericEncoder::kYouTube) width += 3 * active;
  return width;
}

ModelParams init_params(const ModelConfig& config, const FeatureContext& ctx, std::uint64_t seed) {
  Rng rng(seed);
  return init_params(config, ctx, rng);
}

ModelParams init_params(const ModelConfig& config, const FeatureContext& ctx, Rng& rng) {
  if (config.embed_dim < 1) throw InvalidArgument("embed_dim must be >= 1");
  if (config.hidden.empty()) throw InvalidArgument("hidden_dims must be non-empty");
  if (config.l2 < 0.0) throw InvalidArgument("l2 must be non-negative");
  const Schema& schema = ctx.schema;
  const auto d = static_cast<std::size_t>(config.embed_dim);
  const std::vector<std::size_t> active = active_numeric_slots(config, schema);

  ModelParams p;
  for (std::size_t c = 0; c < schema.num_categorical(); ++c) {
    p.categorical.push_back(make_embedding_table(schema.vocab_size(c), d, rng));
  }

  switch (config.encoder) {
    case NumericEncoder::kAutoDis: {
      const AutoDisConfig& a = config.autodis;
      if (a.buckets < 1) throw InvalidArgument("autodis buckets must be >= 1");
      if (a.aggregation.kind == AggregationKind::kTopKSum &&
          (a.aggregation.top_k < 1 || a.aggregation.top_k > a.buckets)) {
        throw InvalidArgument(fmt::format("top_k {} must lie in [1, {}]", a.aggregation.top_k,
                                          a.buckets));
      }
      const auto h = static_cast<std::size_t>(a.buckets);
      for (std::size_t k = 0; k < active.size(); ++k) {
        AutoDisFieldParams f;
        f.me = make_meta_embeddings(h, d, rng);
        f.net = make_autodis_net(h, a.alpha, config.slope, a.bias, rng);
        p.autodis.push_back(std::move(f));
      }
      const std::size_t hidden = a.adaptive_tau ? static_cast<std::size_t>(a.temperature_hidden) : 0;
      const std::size_t nets = a.shared_temperature ? std::min<std::size_t>(1, active.size()) : active.size();
      for (std::size_t k = 0; k < nets; ++k) {
        p.temperature.push_back(make_temperature_net(kCdfSamples + 1, hidden, a.tau,
                                                     a.resolved_epsilon(), config.slope, rng));
      }
      break;
    }
    case NumericEncoder::kFieldEmbedding:
      for (std::size_t k = 0; k < active.size(); ++k) {
        p.field_embeddings.push_back(make_embedding_table(1, d, rng).weights);
      }
      break;
    case NumericEncoder::kHard:
      if (ctx.discretizers.size() != schema.num_numerical()) {
        throw InvalidArgument("hard encoder needs fitted discretizers for every numerical field");
      }
      for (std::size_t slot : active) {
        if (ctx.discretizers[slot].kind() != config.hard_kind) {
          throw InvalidArgument("fitted discretizers do not match the configured hard encoder");
        }
        p.bucket_tables.push_back(
            make_embedding_table(static_cast<std::size_t>(ctx.discretizers[slot].num_buckets()), d, rng));
      }
      break;
    case NumericEncoder::kDlrm:
      if (!active.empty()) {
        std::vector<int> widths{static_cast<int>(active.size())};
        widths.insert(widths.end(), config.dlrm_hidden.begin(), config.dlrm_hidden.end());
        widths.push_back(config.embed_dim);
        p.dlrm = Mlp::create(widths, rng);
      }
      break;
    case NumericEncoder::kYouTube:
      break;
  }

  std::vector<int> widths{static_cast<int>(tower_input_dim(config, schema))};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(1);
  p.tower = Mlp::create(widths, rng);
  return p;
}

double fm_interaction(std::span<const Vector> embeddings) {
  if (embeddings.empty()) return 0.0;
  Vector sum(embeddings.front().size(), 0.0);
  double sum_sq = 0.0;
  for (const Vector& e : embeddings) {
    axpy(1.0, e, sum);
    sum_sq += squared_norm(e);
  }
  return 0.5 * (squared_norm(sum) - sum_sq);
}

ForwardResult forward(const Batch& batch, const ModelParams& params, const ModelConfig& config,
                      const FeatureContext& ctx) {
  check_batch(batch, ctx);
  const std::vector<std::size_t> active = active_numeric_slots(config, ctx.schema);
  ForwardResult result;
  result.probs.resize(batch.size);
  result.cache.version = params.version;
  result.cache.instances.resize(batch.size);

  for (std::size_t i = 0; i < batch.size; ++i) {
    InstanceCache& ic = result.cache.instances[i];
    for (std::size_t c = 0; c < batch.num_categorical; ++c) {
      const int id = batch.categorical(i, c);
      ic.categorical_ids.push_back(id);
      const auto row = lookup(params.categorical[c], id);
      ic.field_embeddings.emplace_back(row.begin(), row.end());
    }
    Vector extra;
    ic.x_norm.resize(active.size());
    for (std::size_t k = 0; k < active.size(); ++k) {
      ic.x_norm[k] = ctx.normalized(active[k], batch.numerical(i, active[k]));
    }
    switch (config.encoder) {
      case NumericEncoder::kAutoDis:
        ic.autodis.resize(active.size());
        for (std::size_t k = 0; k < active.size(); ++k) {
          ic.field_embeddings.push_back(embed_numeric(
              ic.x_norm[k], params.autodis[k].net, temperature_for(params, k), params.autodis[k].me,
              config.autodis.aggregation, ctx.stats_vectors[active[k]], &ic.autodis[k]));
        }
        break;
      case NumericEncoder::kFieldEmbedding:
        for (std::size_t k = 0; k < active.size(); ++k) {
          ic.field_embeddings.push_back(field_embed(ic.x_norm[k], params.field_embeddings[k].row(0)));
        }
        break;
      case NumericEncoder::kHard:
        for (std::size_t k = 0; k < active.size(); ++k) {
          const int b = ctx.discretizers[active[k]].bucket(
              ctx.imputed(active[k], batch.numerical(i, active[k])));
          ic.buckets.push_back(b);
          const auto row = lookup(params.bucket_tables[k], b);
          ic.field_embeddings.emplace_back(row.begin(), row.end());
        }
        break;
      case NumericEncoder::kDlrm:
        if (!active.empty()) {
          ic.dlrm_input = ic.x_norm;
          ic.field_embeddings.push_back(mlp_forward(params.dlrm, ic.dlrm_input, config.slope, &ic.dlrm));
        }
        break;
      case NumericEncoder::kYouTube:
        for (double x : ic.x_norm) {
          const Vector t = youtube_encode(x);
          extra.insert(extra.end(), t.begin(), t.end());
        }
        break;
    }

    Vector input;
    input.reserve(params.tower.input_dim());
    for (const Vector& e : ic.field_embeddings) input.insert(input.end(), e.begin(), e.end());
    input.insert(input.end(), extra.begin(), extra.end());
    double logit = mlp_forward(params.tower, input, config.slope, &ic.tower)[0];
    if (config.use_fm) logit += fm_interaction(ic.field_embeddings);
    ic.prob = sigmoid(logit);
    result.probs[i] = ic.prob;
  }
  return result;
}

Vector predict(const Batch& batch, const ModelParams& params, const ModelConfig& config,
               const FeatureContext& ctx) {
  return forward(batch, params, config, ctx).probs;
}

double binary_logloss(std::span<const double> probs, std::span<const double> labels) {
  if (probs.empty()) throw InvalidArgument("logloss of an empty batch");
  if (probs.size() != labels.size()) {
    throw InvalidArgument(fmt::format("{} predictions for {} labels", probs.size(), labels.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], kProbClip, 1.0 - kProbClip);
    total += labels[i] * std::log(p) + (1.0 - labels[i]) * std::log(1.0 - p);
  }
  return -total / static_cast<double>(probs.size());
}

double l2_penalty(const ModelParams& params) {
  double total = 0.0;
  for (const ConstTensorRef& t : named_tensors(params)) {
    if (t.regularized) total += squared_norm(t.values);
  }
  return total;
}

double loss(std::span<const double> probs, std::span<const double> labels,
            const ModelParams& params, double lambda) {
  const double base = binary_logloss(probs, labels);
  return lambda > 0.0 ? base + lambda * l2_penalty(params) : base;
}

ModelParams backward(const ForwardCache& cache, std::span<const double> labels,
                     const ModelParams& params, const ModelConfig& config) {
  if (cache.version != params.version) {
    throw InvalidArgument("stale forward cache: parameters changed since the forward pass");
  }
  if (cache.instances.size() != labels.size() || labels.empty()) {
    throw InvalidArgument(fmt::format("forward cache holds {} instances but {} labels given",
                                      cache.instances.size(), labels.size()));
  }
  ModelParams grads = params.zeros_like();
  const auto d = static_cast<std::size_t>(config.embed_dim);
  const double inv_b = 1.0 / static_cast<double>(labels.size());
  const std::size_t num_cat = params.categorical.size();

  for (std::size_t i = 0; i < cache.instances.size(); ++i) {
    const InstanceCache& ic = cache.instances[i];
    const double d_logit = (ic.prob - labels[i]) * inv_b;

    Vector d_input;
    const double up[1] = {d_logit};
    mlp_backward(params.tower, ic.tower, up, config.slope, &grads.tower, &d_input);

    const std::size_t fields = ic.field_embeddings.size();
    std::vector<Vector> d_emb(fields, Vector(d, 0.0));
    for (std::size_t f = 0; f < fields; ++f) {
      std::copy_n(d_input.begin() + static_cast<std::ptrdiff_t>(f * d), d, d_emb[f].begin());
    }
    if (config.use_fm && fields > 0) {
      Vector sum(d, 0.0);
      for (const Vector& e : ic.field_embeddings) axpy(1.0, e, sum);
      for (std::size_t f = 0; f < fields; ++f) {
        for (std::size_t c = 0; c < d; ++c) {
          d_emb[f][c] += d_logit * (sum[c] - ic.field_embeddings[f][c]);
        }
      }
    }

    for (std::size_t c = 0; c < num_cat; ++c) {
      lookup_backward(grads.categorical[c], ic.categorical_ids[c], d_emb[c]);
    }
    switch (config.encoder) {
      case NumericEncoder::kAutoDis:
        for (std::size_t k = 0; k < ic.autodis.size(); ++k) {
          TemperatureNet& tgrad =
              grads.temperature.size() == 1 ? grads.temperature[0] : grads.temperature[k];
          embed_numeric_backward(params.autodis[k].net, temperature_for(params, k),
                                 params.autodis[k].me, config.autodis.aggregation, ic.autodis[k],
                                 d_emb[num_cat + k],
                                 {&grads.autodis[k].net, &tgrad, &grads.autodis[k].me});
        }
        break;
      case NumericEncoder::kFieldEmbedding:
        for (std::size_t k = 0; k < ic.x_norm.size(); ++k) {
          axpy(ic.x_norm[k], d_emb[num_cat + k], grads.field_embeddings[k].row(0));
        }
        break;
      case NumericEncoder::kHard:
        for (std::size_t k = 0; k < ic.buckets.size(); ++k) {
          lookup_backward(grads.bucket_tables[k], ic.buckets[k], d_emb[num_cat + k]);
        }
        break;
      case NumericEncoder::kDlrm:
        if (!ic.dlrm_input.empty()) {
          mlp_backward(params.dlrm, ic.dlrm, d_emb[num_cat], config.slope, &grads.dlrm, nullptr);
        }
        break;
      case NumericEncoder::kYouTube:
        break;
    }
  }

  if (config.l2 > 0.0) {
    auto g = named_tensors(grads);
    const auto p = named_tensors(params);
    for (std::size_t t = 0; t < g.size(); ++t) {
      if (!p[t].regularized) continue;
      axpy(2.0 * config.l2, p[t].values, g[t].values);
    }
  }
  return grads;
}

Vector numeric_field_embedding(const ModelParams& params, const ModelConfig& config,
                               const FeatureContext& ctx, std::size_t active_index, double x_norm) {
  const std::vector<std::size_t> active = active_numeric_slots(config, ctx.schema);
  if (active_index >= active.size()) {
    throw InvalidArgument(fmt::format("numerical field index {} is not active", active_index));
  }
  const std::size_t slot = active[active_index];
  switch (config.encoder) {
    case NumericEncoder::kAutoDis:
      return embed_numeric(x_norm, params.autodis[active_index].net,
                           temperature_for(params, active_index), params.autodis[active_index].me,
                           config.autodis.aggregation, ctx.stats_vectors[slot]);
    case NumericEncoder::kFieldEmbedding:
      return field_embed(x_norm, params.field_embeddings[active_index].row(0));
    case NumericEncoder::kHard: {
      const FieldStats& s = ctx.stats[slot];
      const double raw = s.x_min + x_norm * (s.x_max - s.x_min);
      const auto row = lookup(params.bucket_tables[active_index], ctx.discretizers[slot].bucket(raw));
      return Vector(row.begin(), row.end());
    }
    case NumericEncoder::kDlrm:
    case NumericEncoder::kYouTube:
      break;
  }
  throw InvalidArgument(fmt::format("encoder '{}' has no per-field embedding", encoder_name(config)));
}

std::string_view to_string(NumericEncoder encoder) {
  switch (encoder) {
    case NumericEncoder::kAutoDis:
      return "autodis";
    case NumericEncoder::kFieldEmbedding:
      return "field_embedding";
    case NumericEncoder::kYouTube:
      return "youtube";
    case NumericEncoder::kDlrm:
      return "dlrm";
    case NumericEncoder::kHard:
      return "hard";
  }
  return "autodis";
}

NumericEncoder parse_numeric_encoder(std::string_view text, HardKind* hard_kind) {
  if (text == "autodis") return NumericEncoder::kAutoDis;
  if (text == "field_embedding") return NumericEncoder::kFieldEmbedding;
  if (text == "youtube") return NumericEncoder::kYouTube;
  if (text == "dlrm") return NumericEncoder::kDlrm;
  HardKind kind;
  if (text == "edd") {
    kind = HardKind::kEdd;
  } else if (text == "efd") {
    kind = HardKind::kEfd;
  } else if (text == "ld") {
    kind = HardKind::kLd;
  } else {
    throw InvalidArgument(fmt::format("unknown numeric encoder '{}'", text));
  }
  if (hard_kind != nullptr) *hard_kind = kind;
  return NumericEncoder::kHard;
}

std::string encoder_name(const ModelConfig& config) {
  if (config.encoder == NumericEncoder::kHard) return std::string(to_string(config.hard_kind));
  return std::string(to_string(config.encoder));
}

}  // namespace autodis
