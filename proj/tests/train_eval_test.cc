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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "autodis/adam.h"
#include "autodis/analysis.h"
#include "autodis/error.h"
#include "autodis/metrics.h"
#include "autodis/synthetic.h"
#include "autodis/trainer.h"
#include "test_util.h"

namespace autodis {
namespace {

ModelParams scalar_params(double value) {
  ModelParams p;
  p.categorical.push_back(EmbeddingTable{Matrix(1, 1, value)});
  return p;
}

TEST(AdamCases, ZeroGradientLeavesParameters) {
  ModelParams params = scalar_params(0.7);
  params.categorical[0].weights = Matrix{{0.7, -1.5}, {2.0, 0.0}};
  const ModelParams before = params;
  AdamState state = AdamState::for_params(params, {});
  for (int i = 0; i < 5; ++i) adam_step(params, params.zeros_like(), state);
  EXPECT_EQ(params.categorical[0].weights, before.categorical[0].weights);
  EXPECT_EQ(state.step, 5u);
}

TEST(AdamCases, FirstStepMovesByLearningRate) {
  ModelParams params = scalar_params(0.0);
  ModelParams grads = scalar_params(1.0);
  AdamState state = AdamState::for_params(params, {1e-3, 0.9, 0.999, 1e-8});
  adam_step(params, grads, state);
  EXPECT_NEAR(params.categorical[0].weights(0, 0), -1e-3 / (1.0 + 1e-8), 1e-18);
}

TEST(AdamCases, FirstStepOppositeSign) {
  ModelParams params = scalar_params(0.0);
  ModelParams grads = scalar_params(-2.0);
  AdamState state = AdamState::for_params(params, {1e-3, 0.9, 0.999, 1e-8});
  adam_step(params, grads, state);
  EXPECT_NEAR(params.categorical[0].weights(0, 0), 2e-3 / (2.0 + 1e-8), 1e-18);
  EXPECT_NEAR(params.categorical[0].weights(0, 0), 1e-3, 1e-11);
}

TEST(AdamCases, NonFiniteGradientNamesTensor) {
  ModelParams params = scalar_params(0.0);
  ModelParams grads = scalar_params(std::nan(""));
  AdamState state = AdamState::for_params(params, {});
  try {
    adam_step(params, grads, state);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("categorical.0"), std::string::npos);
  }
  EXPECT_EQ(params.categorical[0].weights(0, 0), 0.0);
}

TEST(AdamCases, MatchesReferenceRecurrence) {
  ModelParams params = scalar_params(0.5);
  AdamState state = AdamState::for_params(params, {0.01, 0.8, 0.99, 1e-8});
  double theta = 0.5, m = 0.0, v = 0.0;
  const Vector gs{0.3, -1.0, 2.5, 0.0, -0.25};
  for (std::size_t t = 1; t <= gs.size(); ++t) {
    adam_step(params, scalar_params(gs[t - 1]), state);
    m = 0.8 * m + 0.2 * gs[t - 1];
    v = 0.99 * v + 0.01 * gs[t - 1] * gs[t - 1];
    const double m_hat = m / (1 - std::pow(0.8, t));
    const double v_hat = v / (1 - std::pow(0.99, t));
    theta -= 0.01 * m_hat / (std::sqrt(v_hat) + 1e-8);
    EXPECT_NEAR(params.categorical[0].weights(0, 0), theta, 1e-15);
  }
}

TEST(AucCases, PerfectlySeparated) {
  EXPECT_EQ(auc(Vector{0.1, 0.2, 0.8, 0.9}, Vector{0, 0, 1, 1}), 1.0);
}

TEST(AucCases, PerfectlyInverted) {
  EXPECT_EQ(auc(Vector{0.9, 0.8, 0.2, 0.1}, Vector{0, 0, 1, 1}), 0.0);
}

TEST(AucCases, ThreeOfFourPairs) {
  const Vector s{0.1, 0.4, 0.35, 0.8}, y{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(auc(s, y), 0.75);
  EXPECT_DOUBLE_EQ(test::brute_force_auc(s, y), 0.75);
}

TEST(AucCases, SingleClassUndefined) {
  try {
    auc(Vector{0.2, 0.4}, Vector{1, 1});
    FAIL() << "expected an error";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("AUC undefined"), std::string::npos);
  }
}

TEST(AucCases, AllTiedIsHalf) { EXPECT_EQ(auc(Vector{0.3, 0.3, 0.3}, Vector{0, 1, 1}), 0.5); }

TEST(AucProperties, MatchesBruteForceWithTies) {
  Rng rng(31);
  std::uniform_int_distribution<int> level(0, 6);
  std::uniform_int_distribution<int> size(2, 50);
  int checked = 0;
  while (checked < 200) {
    const int n = size(rng);
    Vector s(n), y(n);
    for (int i = 0; i < n; ++i) {
      s[i] = level(rng) / 6.0;  // few levels so ties are common
      y[i] = level(rng) % 2;
    }
    if (std::count(y.begin(), y.end(), 1.0) == 0 || std::count(y.begin(), y.end(), 0.0) == 0) continue;
    ASSERT_NEAR(auc(s, y), test::brute_force_auc(s, y), 1e-12);
    ++checked;
  }
}

TEST(AucProperties, InvariantUnderIncreasingTransform) {
  Rng rng(32);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vector s(40), y(40), t(40);
    for (int i = 0; i < 40; ++i) {
      s[i] = std::round(unit(rng) * 16) / 16;
      y[i] = i % 3 == 0;
      t[i] = 2 * s[i] + 1;
    }
    EXPECT_EQ(auc(s, y), auc(t, y));
  }
}

TEST(AucProperties, ComplementWithoutTies) {
  Rng rng(33);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vector s(30), y(30), neg(30);
    for (int i = 0; i < 30; ++i) {
      s[i] = unit(rng);
      neg[i] = -s[i];
      y[i] = i % 2;
    }
    EXPECT_NEAR(auc(s, y) + auc(neg, y), 1.0, 1e-15);
  }
}

TEST(LoglossMetricCases, HalfEverywhere) {
  EXPECT_NEAR(logloss_metric(Vector{0.5, 0.5, 0.5}, Vector{0, 1, 1}), std::log(2.0), 1e-15);
}

TEST(LoglossMetricCases, SameAsUnregularizedLoss) {
  const Vector s{0.12, 0.9, 0.55, 1.0}, y{0, 1, 0, 1};
  const ModelParams none;
  EXPECT_NEAR(logloss_metric(s, y), loss(s, y, none, 0.0), 1e-15);
}

TEST(LoglossMetricCases, TwoInstances) {
  EXPECT_NEAR(logloss_metric(Vector{0.9, 0.2}, Vector{1, 0}), 0.164252, 1e-6);
}

struct SinData {
  Dataset train;
  Dataset valid;
  FeatureContext ctx;
};

SinData sin_data(std::size_t samples, std::size_t numerical = 1, std::size_t categorical = 0,
                 std::uint64_t seed = 7) {
  SyntheticSpec spec;
  spec.samples = samples;
  spec.numerical_fields = numerical;
  spec.categorical_fields = categorical;
  spec.categorical_effect = categorical > 0 ? 1.0 : 0.0;
  const Dataset all = gen_synthetic(spec, seed);
  SinData d;
  std::tie(d.train, d.valid) = split_holdout(all, 0.2, seed);
  d.ctx = FeatureContext::fit(d.train, CategoricalMode::kDictionary, Vocabulary(all.schema));
  return d;
}

ModelConfig small_model() {
  ModelConfig c;
  c.embed_dim = 8;
  c.hidden = {16, 8};
  c.autodis.buckets = 10;
  c.autodis.tau = 0.1;
  c.autodis.temperature_hidden = 8;
  return c;
}

TEST(TrainCases, SameSeedIsBitIdentical) {
  const SinData d = sin_data(2000);
  TrainConfig tc;
  tc.epochs = 2;
  tc.batch_size = 64;
  const TrainResult a = train(d.train, d.valid, small_model(), tc, d.ctx);
  const TrainResult b = train(d.train, d.valid, small_model(), tc, d.ctx);
  const auto ta = named_tensors(a.params);
  const auto tb = named_tensors(b.params);
  for (std::size_t t = 0; t < ta.size(); ++t) {
    EXPECT_TRUE(std::equal(ta[t].values.begin(), ta[t].values.end(), tb[t].values.begin()));
  }
  EXPECT_EQ(a.best_valid_auc, b.best_valid_auc);
}

TEST(TrainCases, ZeroLearningRateKeepsParameters) {
  const SinData d = sin_data(1000);
  TrainConfig tc;
  tc.epochs = 2;
  tc.batch_size = 100;
  tc.lr = 0.0;
  tc.seed = 4;
  const TrainResult r = train(d.train, d.valid, small_model(), tc, d.ctx);
  const ModelParams init = init_params(small_model(), d.ctx, 4);
  const auto a = named_tensors(r.params);
  const auto b = named_tensors(init);
  for (std::size_t t = 0; t < a.size(); ++t) {
    EXPECT_TRUE(std::equal(a[t].values.begin(), a[t].values.end(), b[t].values.begin())) << a[t].name;
  }
  EXPECT_GT(r.steps, 0u);
}

TEST(TrainCases, HundredStepsReduceTrainingLoss) {
  const SinData d = sin_data(30000);
  ModelConfig config = small_model();
  config.embed_dim = 16;
  config.hidden = {16, 8};
  config.autodis.buckets = 20;
  TrainConfig tc;
  tc.epochs = 2;
  tc.batch_size = 256;
  tc.lr = 1e-2;
  tc.max_steps = 100;
  const ModelParams init = init_params(config, d.ctx, tc.seed);
  const double before = evaluate(d.train, init, config, d.ctx).logloss;
  const TrainResult r = train(d.train, d.valid, config, tc, d.ctx);
  EXPECT_EQ(r.steps, 100u);
  ASSERT_EQ(r.history.size(), 2u);
  const double after = evaluate(d.train, r.params, config, d.ctx).logloss;
  EXPECT_LE(after, 0.9 * before) << "before " << before << " after " << after;
}

TEST(TrainProperties, ReturnsBestValidationCheckpoint) {
  const SinData d = sin_data(3000);
  TrainConfig tc;
  tc.epochs = 6;
  tc.batch_size = 32;
  tc.lr = 3e-2;  // noisy on purpose so validation AUC moves around
  tc.patience = 6;
  std::vector<EpochRecord> seen;
  const TrainResult r = train(d.train, d.valid, small_model(), tc, d.ctx,
                              [&](const EpochRecord& rec) { seen.push_back(rec); });
  ASSERT_EQ(seen.size(), r.history.size());
  double best = 0.0;
  for (const EpochRecord& rec : r.history) best = std::max(best, rec.valid_auc);
  EXPECT_EQ(r.best_valid_auc, best);
  EXPECT_EQ(evaluate(d.valid, r.params, small_model(), d.ctx).auc, best);
}

TEST(TrainProperties, PatienceStopsEarly) {
  const SinData d = sin_data(1000);
  TrainConfig tc;
  tc.epochs = 50;
  tc.batch_size = 100;
  tc.lr = 0.0;  // validation AUC never improves after the first epoch
  tc.patience = 2;
  const TrainResult r = train(d.train, d.valid, small_model(), tc, d.ctx);
  EXPECT_EQ(r.history.size(), 3u);
  EXPECT_EQ(r.best_epoch, 1);
}

TEST(TrainProperties, DivergenceReturnsFiniteCheckpoint) {
  const SinData d = sin_data(1000);
  ModelConfig config = small_model();
  config.l2 = 1e-3;
  TrainConfig tc;
  tc.epochs = 3;
  tc.batch_size = 50;
  tc.lr = 1e300;
  const TrainResult r = train(d.train, d.valid, config, tc, d.ctx);
  EXPECT_TRUE(r.diverged);
  EXPECT_FALSE(r.divergence_reason.empty());
  for (const ConstTensorRef& t : named_tensors(r.params)) {
    for (double v : t.values) ASSERT_TRUE(std::isfinite(v)) << t.name;
  }
}

TEST(ExportCases, EmbeddingGridShape) {
  const SinData d = sin_data(500);
  const ModelConfig config = small_model();
  const ModelParams params = init_params(config, d.ctx, 1);
  const Table t = export_embeddings(params, config, d.ctx, 0, unit_grid(250));
  EXPECT_EQ(t.rows.size(), 250u);
  EXPECT_EQ(t.header.size(), 1u + config.embed_dim);
  for (const Vector& row : t.rows) EXPECT_EQ(row.size(), 1u + config.embed_dim);
}

TEST(ExportCases, ZeroMetaEmbeddingsExportZeroRows) {
  const SinData d = sin_data(500);
  const ModelConfig config = small_model();
  ModelParams params = init_params(config, d.ctx, 1);
  params.autodis[0].me.weights.fill(0.0);
  const Table t = export_embeddings(params, config, d.ctx, 0, Vector{0.0, 1.0});
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(Vector(t.rows[0].begin() + 1, t.rows[0].end()), Vector(config.embed_dim, 0.0));
  EXPECT_EQ(Vector(t.rows[1].begin() + 1, t.rows[1].end()), Vector(config.embed_dim, 0.0));
}

TEST(ExportCases, TrainedEmbeddingsAreLocallySmooth) {
  const SinData d = sin_data(5000);
  TrainConfig tc;
  tc.epochs = 2;
  tc.batch_size = 64;
  tc.lr = 3e-3;
  const ModelConfig config = small_model();
  const TrainResult r = train(d.train, d.valid, config, tc, d.ctx);
  const Table t = export_embeddings(r.params, config, d.ctx, 0, unit_grid(250));
  const auto dist = [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t c = 1; c < t.rows[i].size(); ++c) s += std::pow(t.rows[i][c] - t.rows[j][c], 2);
    return std::sqrt(s);
  };
  double adjacent = 0.0, distant = 0.0;
  for (std::size_t i = 0; i + 125 < t.rows.size(); ++i) {
    adjacent += dist(i, i + 1);
    distant += dist(i, i + 125);
  }
  EXPECT_LT(adjacent, distant);
}

TEST(ExportCases, CategoricalFieldRejected) {
  const SinData d = sin_data(500, 1, 1);
  const ModelConfig config = small_model();
  const ModelParams params = init_params(config, d.ctx, 1);
  EXPECT_THROW(export_embeddings(params, config, d.ctx, 0, unit_grid(3)), InvalidArgument);
  EXPECT_NO_THROW(export_embeddings(params, config, d.ctx, 1, unit_grid(3)));
}

TEST(ExportCases, SoftDistributionRowsAreDistributions) {
  const SinData d = sin_data(500);
  const ModelConfig config = small_model();
  const ModelParams params = init_params(config, d.ctx, 2);
  const Table t = export_soft_distribution(params, config, d.ctx, 0, unit_grid(101));
  EXPECT_EQ(t.header.size(), 2u + config.autodis.buckets);
  for (const Vector& row : t.rows) {
    ASSERT_EQ(row.size(), 2u + config.autodis.buckets);
    double sum = 0.0;
    for (std::size_t h = 2; h < row.size(); ++h) sum += row[h];
    EXPECT_NEAR(sum, 1.0, 1e-9);
    EXPECT_GT(row[1], 0.0);
  }
}

TEST(ExportCases, SoftDistributionIsContinuous) {
  const SinData d = sin_data(500);
  const ModelConfig config = small_model();
  const ModelParams params = init_params(config, d.ctx, 3);
  Rng rng(3);
  std::uniform_real_distribution<double> unit(0.0, 0.999);
  for (int i = 0; i < 100; ++i) {
    const double x = unit(rng);
    const Table t = export_soft_distribution(params, config, d.ctx, 0, Vector{x, x + 1e-6});
    double l1 = 0.0;
    for (std::size_t h = 2; h < t.rows[0].size(); ++h) l1 += std::abs(t.rows[0][h] - t.rows[1][h]);
    EXPECT_LT(l1, 1e-3);
  }
}

TEST(ExportCases, SoftDistributionNeedsAutoDis) {
  const SinData d = sin_data(500);
  ModelConfig config = small_model();
  config.encoder = NumericEncoder::kFieldEmbedding;
  const ModelParams params = init_params(config, d.ctx, 1);
  EXPECT_THROW(export_soft_distribution(params, config, d.ctx, 0, unit_grid(3)), InvalidArgument);
}

TEST(ExportCases, TableWritesHeaderAndRows) {
  Table t{{"x", "e0"}, {{0.5, -1.0}, {1.0, 0.25}}};
  std::ostringstream out;
  t.write(out);
  EXPECT_EQ(out.str(), "x\te0\n0.5\t-1\n1\t0.25\n");
}

TEST(AblationCases, OneStepPerFieldPlusBaseline) {
  const SinData d = sin_data(1500, 2, 1);
  TrainConfig tc;
  tc.epochs = 1;
  tc.batch_size = 128;
  const std::vector<int> order{1, 2};
  const auto steps = ablation_fields(d.train, d.valid, d.valid, small_model(), tc, d.ctx, order, 1);
  ASSERT_EQ(steps.size(), 3u);
  EXPECT_TRUE(steps[0].fields.empty());
  EXPECT_EQ(steps[1].fields, (std::vector<int>{1}));
  EXPECT_EQ(steps[2].fields, (std::vector<int>{1, 2}));

  // The first step is exactly the categorical-only model.
  ModelConfig cat_only = small_model();
  cat_only.numeric_fields = std::vector<int>{};
  const TrainResult r = train(d.train, d.valid, cat_only, tc, d.ctx);
  EXPECT_EQ(steps[0].mean.auc, evaluate(d.valid, r.params, cat_only, d.ctx).auc);
}

TEST(AblationCases, UnknownFieldRejected) {
  const SinData d = sin_data(500, 2, 1);
  const std::vector<int> order{7};
  EXPECT_THROW(ablation_fields(d.train, d.valid, d.valid, small_model(), {}, d.ctx, order, 1),
               InvalidArgument);
  const std::vector<int> categorical{0};
  EXPECT_THROW(ablation_fields(d.train, d.valid, d.valid, small_model(), {}, d.ctx, categorical, 1),
               InvalidArgument);
}

TEST(AblationCases, FieldOrderSpecs) {
  const Schema s = Schema::parse("cat:3,num,num,num");
  EXPECT_EQ(resolve_field_order("3,1", s), (std::vector<int>{3, 1}));
  const auto random = resolve_field_order("random:5", s);
  EXPECT_EQ(random, resolve_field_order("random(5)", s));
  std::vector<int> sorted = random;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{1, 2, 3}));
  EXPECT_THROW(resolve_field_order("0", s), InvalidArgument);
  EXPECT_THROW(resolve_field_order("1,1", s), InvalidArgument);
  EXPECT_THROW(resolve_field_order("random:x", s), InvalidArgument);
}

TEST(ComplexityCases, CountsAndStableTiming) {
  const SinData d = sin_data(3000);
  const ModelConfig config = small_model();
  const ModelParams params = init_params(config, d.ctx, 1);
  std::vector<std::size_t> ids(1024);
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  const Batch batch = make_batch(d.train, ids);
  const Complexity a = measure_complexity(params, config, d.ctx, batch);
  const Complexity b = measure_complexity(params, config, d.ctx, batch);
  EXPECT_EQ(a.param_count, parameter_count(params));
  EXPECT_GT(a.batch_inference_ms, 0.0);
  EXPECT_LT(std::abs(a.batch_inference_ms - b.batch_inference_ms),
            0.5 * std::max(a.batch_inference_ms, b.batch_inference_ms));
}

}  // namespace
}  // namespace autodis
