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

#include "autodis/dataset.h"
#include "autodis/error.h"
#include "autodis/feature_context.h"
#include "autodis/ops.h"
#include "autodis/random.h"
#include "autodis/stats.h"
#include "autodis/synthetic.h"
#include "test_util.h"

namespace autodis {
namespace {

Dataset numeric_dataset(const Vector& values) {
  Dataset d{Schema::parse("num"), {}};
  for (double v : values) d.instances.push_back({{}, {v}, 0});
  return d;
}

Dataset parse_text(const std::string& text, const Schema& schema, Vocabulary* vocab,
                   CategoricalMode mode = CategoricalMode::kDictionary) {
  std::istringstream in(text);
  return parse_tabular(in, schema, '\t', mode, vocab);
}

TEST(SchemaCases, ParseAndRender) {
  const Schema s = Schema::parse("cat:4,num,cat:7");
  ASSERT_EQ(s.num_fields(), 3u);
  EXPECT_EQ(s.num_categorical(), 2u);
  EXPECT_EQ(s.num_numerical(), 1u);
  EXPECT_EQ(s.slot(2), 1u);
  EXPECT_EQ(s.vocab_size(1), 7);
  EXPECT_EQ(Schema::parse(s.to_string()), s);
}

TEST(SchemaCases, RejectsBadDeclarations) {
  EXPECT_THROW(Schema::parse(""), InvalidArgument);
  EXPECT_THROW(Schema::parse("cat:0"), InvalidArgument);
  EXPECT_THROW(Schema::parse("cat:x"), InvalidArgument);
  EXPECT_THROW(Schema::parse("text"), InvalidArgument);
  EXPECT_THROW(Schema({{1, FieldKind::kNumerical, 0}}), InvalidArgument);
}

TEST(LoadTabularCases, ThreeRows) {
  const Schema schema = Schema::parse("cat:4,num");
  Vocabulary vocab(schema);
  const Dataset d = parse_text("1\tred\t0.5\n0\tblue\t2\n1\tred\t-3\n", schema, &vocab);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.instances[0].categorical_ids[0], 1);
  EXPECT_EQ(d.instances[1].categorical_ids[0], 2);
  EXPECT_EQ(d.instances[2].categorical_ids[0], 1);
  EXPECT_EQ(d.instances[2].numerical_values[0], -3.0);
  EXPECT_EQ(d.instances[1].label, 0);
}

TEST(LoadTabularCases, EmptyFileHasNoInstances) {
  const Schema schema = Schema::parse("num");
  const auto dir = test::scratch_dir();
  test::write_file(dir / "empty.tsv", "");
  try {
    load_tabular(dir / "empty.tsv", schema, '\t', CategoricalMode::kDictionary, nullptr);
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("no instances"), std::string::npos);
  }
}

TEST(LoadTabularCases, NonNumericCellNamesRowAndField) {
  const Schema schema = Schema::parse("cat:4,num");
  Vocabulary vocab(schema);
  try {
    parse_text("1\ta\t0.5\n0\tb\tabc\n", schema, &vocab);
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("row 2"), std::string::npos) << what;
    EXPECT_NE(what.find("field 1"), std::string::npos) << what;
  }
}

TEST(LoadTabularCases, WrongColumnCountNamesRow) {
  const Schema schema = Schema::parse("num,num");
  try {
    parse_text("1\t0.5\t1\n0\t1\n", schema, nullptr);
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
}

TEST(LoadTabularCases, UnknownTokenMapsToReservedIndex) {
  const Schema schema = Schema::parse("cat:3,num");
  Vocabulary vocab(schema);
  parse_text("1\ta\t0\n0\tb\t1\n", schema, &vocab);
  vocab.freeze();
  const Dataset test = parse_text("1\tz\t0\n0\tb\t1\n", schema, &vocab);
  EXPECT_EQ(test.instances[0].categorical_ids[0], 0);
  EXPECT_EQ(test.instances[1].categorical_ids[0], 2);
}

TEST(LoadTabularCases, FullDictionaryMapsOverflowToReservedIndex) {
  const Schema schema = Schema::parse("cat:3");
  Vocabulary vocab(schema);
  const Dataset d = parse_text("1\ta\n0\tb\n1\tc\n", schema, &vocab);
  EXPECT_EQ(d.instances[2].categorical_ids[0], 0);
}

TEST(LoadTabularCases, HashModeStaysInRange) {
  const Schema schema = Schema::parse("cat:5");
  const Dataset d = parse_text("1\talpha\n0\tbeta\n1\tgamma\n", schema, nullptr, CategoricalMode::kHash);
  for (const Instance& inst : d.instances) {
    EXPECT_GE(inst.categorical_ids[0], 0);
    EXPECT_LT(inst.categorical_ids[0], 5);
  }
  EXPECT_EQ(d.instances[0].categorical_ids[0], static_cast<int>(fnv1a64("alpha") % 5));
}

TEST(LoadTabularCases, MissingNumericalCellIsImputedWithMean) {
  const Schema schema = Schema::parse("num");
  Dataset d = parse_text("1\t1\n0\t\n1\t3\n", schema, nullptr);
  EXPECT_TRUE(std::isnan(d.instances[1].numerical_values[0]));
  const FieldStats stats = compute_stats(d, 0);
  EXPECT_EQ(stats.count, 2u);
  EXPECT_EQ(stats.mean, 2.0);
  impute_missing(d, std::span<const FieldStats>(&stats, 1));
  EXPECT_EQ(d.instances[1].numerical_values[0], 2.0);
}

TEST(LoadTabularCases, BadLabelRejected) {
  EXPECT_THROW(parse_text("2\t1\n", Schema::parse("num"), nullptr), DataError);
}

TEST(LoadTabularCases, WriteThenReadRoundTrips) {
  const Schema schema = Schema::parse("cat:9,num,num");
  Dataset d{schema, {{{3}, {0.1, 1e-17}, 1}, {{8}, {-2.5, 1.0 / 3.0}, 0}}};
  std::ostringstream out;
  write_tabular(out, d, ',');
  std::istringstream in(out.str());
  const Dataset back = parse_tabular(in, schema, ',', CategoricalMode::kHash, nullptr);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(back.instances[i].numerical_values, d.instances[i].numerical_values);
    EXPECT_EQ(back.instances[i].label, d.instances[i].label);
  }
}

TEST(ComputeStatsCases, MinMaxMean) {
  const FieldStats s = compute_stats(numeric_dataset({0, 5, 10}), 0);
  EXPECT_EQ(s.x_min, 0.0);
  EXPECT_EQ(s.x_max, 10.0);
  EXPECT_EQ(s.mean, 5.0);
  EXPECT_EQ(s.count, 3u);
}

TEST(ComputeStatsCases, DegenerateField) {
  const FieldStats s = compute_stats(numeric_dataset({2, 2, 2}), 0);
  EXPECT_EQ(s.x_min, 2.0);
  EXPECT_EQ(s.x_max, 2.0);
  EXPECT_EQ(s.mean, 2.0);
  for (double c : s.cdf_samples) EXPECT_EQ(c, 1.0);
}

TEST(ComputeStatsCases, UniformCdfTracksIdentity) {
  Rng rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector values(10000);
  for (double& v : values) v = unit(rng);
  const FieldStats s = compute_stats(numeric_dataset(values), 0);
  ASSERT_EQ(s.cdf_samples.size(), kCdfSamples);
  Vector sorted = values;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < kCdfSamples; ++k) {
    const double point = s.x_min + (k + 0.5) * (s.x_max - s.x_min) / kCdfSamples;
    // Exact empirical CDF by counting.
    const double count = static_cast<double>(
        std::count_if(values.begin(), values.end(), [&](double v) { return v <= point; }));
    EXPECT_EQ(s.cdf_samples[k], count / values.size());
    EXPECT_NEAR(s.cdf_samples[k], point, 0.03);
  }
}

TEST(ComputeStatsCases, CategoricalFieldRejected) {
  Dataset d{Schema::parse("cat:3,num"), {{{1}, {0.5}, 1}}};
  EXPECT_THROW(compute_stats(d, 0), InvalidArgument);
}

TEST(NormalizeCases, MidpointEndpointAndClamp) {
  FieldStats s;
  s.x_min = 0;
  s.x_max = 10;
  EXPECT_EQ(normalize_value(5, s), 0.5);
  EXPECT_EQ(normalize_value(0, s), 0.0);
  EXPECT_EQ(normalize_value(12, s), 1.0);
  EXPECT_EQ(normalize_value(-4, s), 0.0);
}

TEST(NormalizeCases, DegenerateFieldIsHalf) {
  FieldStats s;
  s.x_min = s.x_max = 3;
  EXPECT_EQ(normalize_value(3, s), 0.5);
  EXPECT_EQ(normalize_value(-100, s), 0.5);
}

TEST(StatsVectorCases, CdfThenNormalizedMean) {
  const FieldStats s = compute_stats(numeric_dataset({0, 1, 2, 3, 14}), 0);
  const Vector v = stats_vector(s);
  ASSERT_EQ(v.size(), kCdfSamples + 1);
  EXPECT_EQ(v.back(), normalize_value(4.0, s));
  EXPECT_TRUE(std::equal(s.cdf_samples.begin(), s.cdf_samples.end(), v.begin()));
}

TEST(StatsProperties, CdfIsNonDecreasingWithinUnitInterval) {
  Rng rng(2);
  std::lognormal_distribution<double> skewed(0.0, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    Vector values(1 + trial * 7);
    for (double& v : values) v = skewed(rng);
    const FieldStats s = compute_stats(numeric_dataset(values), 0);
    EXPECT_LE(s.x_min, s.mean);
    EXPECT_LE(s.mean, s.x_max);
    EXPECT_GE(s.cdf_samples.front(), 0.0);
    EXPECT_LE(s.cdf_samples.back(), 1.0);
    EXPECT_TRUE(std::is_sorted(s.cdf_samples.begin(), s.cdf_samples.end()));
  }
}

TEST(StatsProperties, NormalizationIsMonotoneAndInRange) {
  Rng rng(4);
  std::normal_distribution<double> normal(3.0, 10.0);
  Vector values(500);
  for (double& v : values) v = normal(rng);
  const FieldStats s = compute_stats(numeric_dataset(values), 0);
  EXPECT_EQ(normalize_value(s.x_min, s), 0.0);
  EXPECT_EQ(normalize_value(s.x_max, s), 1.0);
  Vector sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double prev = -1.0;
  for (double v : sorted) {
    const double n = normalize_value(v, s);
    EXPECT_GE(n, 0.0);
    EXPECT_LE(n, 1.0);
    EXPECT_GE(n, prev);
    prev = n;
  }
}

Dataset counting_dataset(std::size_t n) {
  Dataset d{Schema::parse("num"), {}};
  for (std::size_t i = 0; i < n; ++i) d.instances.push_back({{}, {static_cast<double>(i)}, int(i % 2)});
  return d;
}

TEST(MakeBatchesCases, LastBatchIsShort) {
  const auto batches = make_batches(counting_dataset(10), 4, std::nullopt);
  ASSERT_EQ(batches.size(), 3u);
  EXPECT_EQ(batches[0].size, 4u);
  EXPECT_EQ(batches[1].size, 4u);
  EXPECT_EQ(batches[2].size, 2u);
}

TEST(MakeBatchesCases, SameSeedSameOrder) {
  const Dataset d = counting_dataset(37);
  const auto a = make_batches(d, 5, 99);
  const auto b = make_batches(d, 5, 99);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].instance_ids, b[i].instance_ids);
}

TEST(MakeBatchesCases, NoSeedKeepsInsertionOrder) {
  const auto batches = make_batches(counting_dataset(10), 4, std::nullopt);
  std::size_t expected = 0;
  for (const Batch& b : batches) {
    for (std::size_t i = 0; i < b.size; ++i) {
      EXPECT_EQ(b.instance_ids[i], expected);
      EXPECT_EQ(b.numerical(i, 0), static_cast<double>(expected));
      ++expected;
    }
  }
}

TEST(MakeBatchesCases, ZeroBatchSizeRejected) {
  EXPECT_THROW(make_batches(counting_dataset(3), 0, std::nullopt), InvalidArgument);
}

TEST(MakeBatchesProperties, EpochIsPermutation) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 1 + seed * 13;
    const auto batches = make_batches(counting_dataset(n), 1 + seed % 7, seed);
    std::vector<std::size_t> seen;
    for (const Batch& b : batches) {
      ASSERT_GE(b.size, 1u);
      for (std::size_t i = 0; i < b.size; ++i) {
        seen.push_back(b.instance_ids[i]);
        ASSERT_EQ(b.numerical(i, 0), static_cast<double>(b.instance_ids[i]));
      }
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(seen[i], i);
  }
}

TEST(SplitHoldoutCases, PartitionsDeterministically) {
  const Dataset d = counting_dataset(100);
  const auto [train, hold] = split_holdout(d, 0.2, 5);
  EXPECT_EQ(train.size(), 80u);
  EXPECT_EQ(hold.size(), 20u);
  const auto [train2, hold2] = split_holdout(d, 0.2, 5);
  EXPECT_EQ(hold.instances, hold2.instances);
  std::vector<double> all;
  for (const auto* part : {&train, &hold}) {
    for (const Instance& inst : part->instances) all.push_back(inst.numerical_values[0]);
  }
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], static_cast<double>(i));
}

SyntheticSpec sin_spec(std::size_t n) {
  SyntheticSpec spec;
  spec.samples = n;
  spec.a = 4.0;
  spec.b = 6.0;
  spec.c = -1.0;
  return spec;
}

TEST(SyntheticCases, SameSeedSameBytes) {
  std::ostringstream a, b;
  write_tabular(a, gen_synthetic(sin_spec(1000), 7), '\t');
  write_tabular(b, gen_synthetic(sin_spec(1000), 7), '\t');
  EXPECT_EQ(a.str(), b.str());
  std::ostringstream c;
  write_tabular(c, gen_synthetic(sin_spec(1000), 8), '\t');
  EXPECT_NE(a.str(), c.str());
}

TEST(SyntheticCases, ConstantInfiniteLogitIsDegenerate) {
  SyntheticSpec spec;
  spec.samples = 500;
  spec.family = LabelFamily::kConstant;
  spec.c = std::numeric_limits<double>::infinity();
  try {
    gen_synthetic(spec, 1);
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate labels"), std::string::npos);
  }
}

TEST(SyntheticCases, ZeroSamplesRejected) {
  EXPECT_THROW(gen_synthetic(sin_spec(0), 1), DataError);
}

TEST(SyntheticCases, ConditionalRateMatchesIntegratedLogit) {
  const SyntheticSpec spec = sin_spec(50000);
  const Dataset d = gen_synthetic(spec, 7);
  double hits = 0.0, count = 0.0;
  for (const Instance& inst : d.instances) {
    const double x = inst.numerical_values[0];
    if (x >= 0.2 && x <= 0.3) {
      count += 1.0;
      hits += inst.label;
    }
  }
  // Composite Simpson rule for the mean of sigmoid(4 sin(6x) - 1) on [0.2, 0.3].
  const int n = 1000;
  const double lo = 0.2, hi = 0.3, h = (hi - lo) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += w * sigmoid(4.0 * std::sin(6.0 * (lo + i * h)) - 1.0);
  }
  const double expected = sum * h / 3.0 / (hi - lo);
  EXPECT_NEAR(hits / count, expected, 0.05);
}

TEST(SyntheticCases, CategoricalIdsLeaveUnknownSlotFree) {
  SyntheticSpec spec = sin_spec(2000);
  spec.categorical_fields = 2;
  spec.vocab_size = 4;
  spec.categorical_effect = 1.0;
  const Dataset d = gen_synthetic(spec, 3);
  EXPECT_EQ(d.schema.num_categorical(), 2u);
  EXPECT_EQ(d.schema.vocab_size(0), 5);
  for (const Instance& inst : d.instances) {
    for (int id : inst.categorical_ids) {
      EXPECT_GE(id, 1);
      EXPECT_LE(id, 4);
    }
  }
}

TEST(SyntheticProperties, PositiveRatioWithinBounds) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = gen_synthetic(sin_spec(2000), seed);
    double pos = 0.0;
    for (const Instance& inst : d.instances) pos += inst.label;
    EXPECT_GE(pos / d.size(), 0.05);
    EXPECT_LE(pos / d.size(), 0.95);
  }
}

TEST(FeatureContextCases, SaveLoadRoundTrip) {
  const Schema schema = Schema::parse("cat:4,num,num");
  Vocabulary vocab(schema);
  const Dataset d = parse_text("1\tx\t0.5\t10\n0\ty\t0.25\t\n1\tz\t3\t-1\n0\tx\t7\t2\n", schema, &vocab);
  FeatureContext ctx = FeatureContext::fit(d, CategoricalMode::kDictionary, vocab);
  for (HardKind kind : {HardKind::kEdd, HardKind::kEfd, HardKind::kLd}) {
    ctx.fit_discretizers(d, kind, std::vector<int>{3});
    std::stringstream buffer;
    ctx.save(buffer);
    const FeatureContext back = FeatureContext::load(buffer);
    EXPECT_EQ(back.schema, ctx.schema);
    EXPECT_EQ(back.stats, ctx.stats);
    EXPECT_EQ(back.stats_vectors, ctx.stats_vectors);
    ASSERT_EQ(back.discretizers.size(), 2u);
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_EQ(back.discretizers[j].boundaries(), ctx.discretizers[j].boundaries());
      EXPECT_EQ(back.discretizers[j].num_buckets(), ctx.discretizers[j].num_buckets());
      for (double x : {-5.0, 0.3, 1.0, 2.5, 9.0}) {
        EXPECT_EQ(back.discretizers[j].bucket(x), ctx.discretizers[j].bucket(x));
      }
    }
    Vocabulary reloaded = back.vocabulary;
    EXPECT_EQ(reloaded.index(0, "y"), 2);
    EXPECT_EQ(reloaded.index(0, "never-seen"), 0);
  }
}

TEST(FeatureContextCases, MissingValueUsesTrainingMean) {
  const Dataset d = numeric_dataset({0, 4, 8});
  const FeatureContext ctx = FeatureContext::fit(d, CategoricalMode::kDictionary, Vocabulary(d.schema));
  EXPECT_EQ(ctx.imputed(0, std::nan("")), 4.0);
  EXPECT_EQ(ctx.normalized(0, std::nan("")), 0.5);
}

}  // namespace
}  // namespace autodis
