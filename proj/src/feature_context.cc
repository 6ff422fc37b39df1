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

#include "autodis/feature_context.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "autodis/error.h"

namespace autodis {
namespace {

constexpr std::string_view kHeader = "# autodis-stats v1";

double parse_double(std::string_view text, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(fmt::format("stats line {}: bad number '{}'", line, text));
  }
  return v;
}

int parse_int(std::string_view text, std::size_t line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(fmt::format("stats line {}: bad integer '{}'", line, text));
  }
  return v;
}

HardKind parse_hard_kind(std::string_view text) {
  if (text == "edd") return HardKind::kEdd;
  if (text == "efd") return HardKind::kEfd;
  if (text == "ld") return HardKind::kLd;
  throw DataError(fmt::format("unknown discretizer kind '{}'", text));
}

struct PendingHard {
  HardKind kind = HardKind::kEdd;
  int buckets = 1;
  int ld_max = 0;
  bool ld_shift = true;
  std::map<int, double> boundaries;
  bool present = false;
};

}  // namespace

FeatureContext FeatureContext::fit(const Dataset& train, CategoricalMode mode,
                                   Vocabulary vocabulary) {
  if (train.empty()) throw DataError("cannot fit statistics on an empty dataset");
  FeatureContext ctx;
  ctx.schema = train.schema;
  ctx.mode = mode;
  ctx.vocabulary = std::move(vocabulary);
  ctx.vocabulary.freeze();
  for (std::size_t j = 0; j < ctx.schema.num_numerical(); ++j) {
    ctx.stats.push_back(compute_stats(train, ctx.schema.numerical_field(j)));
    ctx.stats_vectors.push_back(stats_vector(ctx.stats.back()));
  }
  return ctx;
}

void FeatureContext::fit_discretizers(const Dataset& train, HardKind kind,
                                      std::span<const int> buckets, bool ld_shift) {
  const std::size_t n = schema.num_numerical();
  if (buckets.size() != 1 && buckets.size() != n) {
    throw InvalidArgument(
        fmt::format("{} bucket counts given for {} numerical fields", buckets.size(), n));
  }
  discretizers.clear();
  for (std::size_t j = 0; j < n; ++j) {
    const int h = buckets.size() == 1 ? buckets[0] : buckets[j];
    Vector values;
    values.reserve(train.size());
    for (const Instance& inst : train.instances) {
      if (!std::isnan(inst.numerical_values[j])) values.push_back(inst.numerical_values[j]);
    }
    switch (kind) {
      case HardKind::kEdd:
        discretizers.push_back(HardDiscretizer::fit_edd(stats[j], h));
        break;
      case HardKind::kEfd:
        std::sort(values.begin(), values.end());
        discretizers.push_back(HardDiscretizer::fit_efd(values, h, stats[j]));
        break;
      case HardKind::kLd:
        discretizers.push_back(HardDiscretizer::fit_ld(values, stats[j], ld_shift));
        break;
    }
  }
}

void FeatureContext::save(std::ostream& out) const {
  out << kHeader << '\n';
  out << "schema " << schema.to_string() << '\n';
  out << "mode " << to_string(mode) << '\n';
  for (std::size_t j = 0; j < stats.size(); ++j) {
    const int id = schema.numerical_field(j);
    const FieldStats& s = stats[j];
    out << fmt::format("{} x_min {}\n{} x_max {}\n{} mean {}\n{} count {}\n", id, s.x_min, id,
                       s.x_max, id, s.mean, id, s.count);
    for (std::size_t k = 0; k < s.cdf_samples.size(); ++k) {
      out << fmt::format("{} cdf.{} {}\n", id, k, s.cdf_samples[k]);
    }
    if (!discretizers.empty()) {
      const HardDiscretizer& d = discretizers[j];
      out << fmt::format("{} hard.kind {}\n{} hard.buckets {}\n{} hard.ld_max {}\n", id,
                         to_string(d.kind()), id, d.requested_buckets(), id, d.ld_max_bucket());
      if (d.kind() == HardKind::kLd) out << fmt::format("{} hard.ld_shift {}\n", id, d.ld_shift() ? 1 : 0);
      for (std::size_t k = 0; k < d.boundaries().size(); ++k) {
        out << fmt::format("{} hard.boundary.{} {}\n", id, k, d.boundaries()[k]);
      }
    }
  }
  for (std::size_t c = 0; c < schema.num_categorical(); ++c) {
    const int id = schema.categorical_field(c);
    for (const auto& [index, token] : vocabulary.entries(c)) {
      out << fmt::format("{} dict {} {}\n", id, index, token);
    }
  }
}

void FeatureContext::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  save(out);
}

FeatureContext FeatureContext::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw DataError("not an autodis stats file");
  FeatureContext ctx;
  std::map<int, FieldStats> stats;
  std::map<int, PendingHard> hard;
  std::vector<std::tuple<int, int, std::string>> dict;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string first, key;
    ss >> first;
    if (first == "schema") {
      std::string decl;
      ss >> decl;
      ctx.schema = Schema::parse(decl);
      continue;
    }
    if (first == "mode") {
      std::string m;
      ss >> m;
      ctx.mode = parse_categorical_mode(m);
      continue;
    }
    const int id = parse_int(first, lineno);
    ss >> key;
    std::string value;
    ss >> std::ws;
    std::getline(ss, value);
    if (key == "dict") {
      const auto space = value.find(' ');
      if (space == std::string::npos) throw DataError(fmt::format("stats line {}: bad dict entry", lineno));
      dict.emplace_back(id, parse_int(std::string_view(value).substr(0, space), lineno),
                        value.substr(space + 1));
      continue;
    }
    FieldStats& s = stats[id];
    if (key == "x_min") {
      s.x_min = parse_double(value, lineno);
    } else if (key == "x_max") {
      s.x_max = parse_double(value, lineno);
    } else if (key == "mean") {
      s.mean = parse_double(value, lineno);
    } else if (key == "count") {
      s.count = static_cast<std::size_t>(parse_int(value, lineno));
    } else if (key.starts_with("cdf.")) {
      const auto k = static_cast<std::size_t>(parse_int(std::string_view(key).substr(4), lineno));
      if (s.cdf_samples.size() <= k) s.cdf_samples.resize(k + 1);
      s.cdf_samples[k] = parse_double(value, lineno);
    } else if (key == "hard.kind") {
      hard[id].kind = parse_hard_kind(value);
      hard[id].present = true;
    } else if (key == "hard.buckets") {
      hard[id].buckets = parse_int(value, lineno);
    } else if (key == "hard.ld_shift") {
      hard[id].ld_shift = parse_int(value, lineno) != 0;
    } else if (key == "hard.ld_max") {
      hard[id].ld_max = parse_int(value, lineno);
    } else if (key.starts_with("hard.boundary.")) {
      hard[id].boundaries[parse_int(std::string_view(key).substr(14), lineno)] =
          parse_double(value, lineno);
    } else {
      throw DataError(fmt::format("stats line {}: unknown key '{}'", lineno, key));
    }
  }
  if (ctx.schema.num_fields() == 0) throw DataError("stats file has no schema line");

  ctx.vocabulary = Vocabulary(ctx.schema);
  for (auto& [id, index, token] : dict) {
    ctx.vocabulary.insert(ctx.schema.slot(id), std::move(token), index);
  }
  ctx.vocabulary.freeze();

  for (std::size_t j = 0; j < ctx.schema.num_numerical(); ++j) {
    const int id = ctx.schema.numerical_field(j);
    auto it = stats.find(id);
    if (it == stats.end() || it->second.cdf_samples.size() != kCdfSamples) {
      throw DataError(fmt::format("stats file is missing statistics for field {}", id));
    }
    ctx.stats.push_back(it->second);
    ctx.stats_vectors.push_back(stats_vector(it->second));
  }
  if (!hard.empty()) {
    for (std::size_t j = 0; j < ctx.schema.num_numerical(); ++j) {
      const int id = ctx.schema.numerical_field(j);
      const PendingHard& p = hard[id];
      if (!p.present) throw DataError(fmt::format("stats file lacks discretizer for field {}", id));
      Vector boundaries;
      for (const auto& [k, b] : p.boundaries) boundaries.push_back(b);
      ctx.discretizers.push_back(
          HardDiscretizer::restore(p.kind, p.buckets, std::move(boundaries), p.ld_max, ctx.stats[j],
                                   p.ld_shift));
    }
  }
  return ctx;
}

FeatureContext FeatureContext::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open stats file '{}'", path.string()));
  return load(in);
}

}  // namespace autodis
