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

#include "autodis/config.h"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>

#include "autodis/error.h"

namespace autodis {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument(fmt::format("'{}' is not a valid number", text));
  }
  return v;
}

int parse_positive(std::string_view text) {
  const int v = parse_number<int>(text);
  if (v < 1) throw InvalidArgument(fmt::format("expected a positive integer, got {}", v));
  return v;
}

bool parse_bool(std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw InvalidArgument(fmt::format("'{}' is not a boolean", text));
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(parse_number<int>(trim(text.substr(start, end - start))));
    start = end + 1;
  }
  return out;
}

std::string join(const std::vector<int>& values) {
  std::string out;
  for (int v : values) out += (out.empty() ? "" : ",") + std::to_string(v);
  return out;
}

std::string fmt_real(double v) { return fmt::format("{}", v); }

struct KeySpec {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = [] {
    std::vector<KeySpec> t;
    auto add = [&](std::string key, auto set, auto get) {
      t.push_back({std::move(key), set, get});
    };
    // data
    add("data.train", [](RunConfig& c, std::string_view v) { c.data.train = v; },
        [](const RunConfig& c) { return c.data.train; });
    add("data.valid", [](RunConfig& c, std::string_view v) { c.data.valid = v; },
        [](const RunConfig& c) { return c.data.valid; });
    add("data.test", [](RunConfig& c, std::string_view v) { c.data.test = v; },
        [](const RunConfig& c) { return c.data.test; });
    add("data.schema",
        [](RunConfig& c, std::string_view v) {
          if (!v.empty()) Schema::parse(v);
          c.data.schema = v;
        },
        [](const RunConfig& c) { return c.data.schema; });
    add("data.delimiter", [](RunConfig& c, std::string_view v) { c.data.delimiter = parse_delimiter(v); },
        [](const RunConfig& c) { return delimiter_name(c.data.delimiter); });
    add("data.categorical_mode",
        [](RunConfig& c, std::string_view v) { c.data.categorical_mode = parse_categorical_mode(v); },
        [](const RunConfig& c) { return std::string(to_string(c.data.categorical_mode)); });
    add("data.valid_fraction",
        [](RunConfig& c, std::string_view v) {
          const double f = parse_number<double>(v);
          if (!(f > 0.0 && f < 1.0)) throw InvalidArgument("must lie in (0, 1)");
          c.data.valid_fraction = f;
        },
        [](const RunConfig& c) { return fmt_real(c.data.valid_fraction); });
    // model
    add("model.encoder",
        [](RunConfig& c, std::string_view v) {
          c.model.encoder = parse_numeric_encoder(v, &c.model.hard_kind);
        },
        [](const RunConfig& c) { return encoder_name(c.model); });
    add("model.embed_dim", [](RunConfig& c, std::string_view v) { c.model.embed_dim = parse_positive(v); },
        [](const RunConfig& c) { return std::to_string(c.model.embed_dim); });
    add("model.hidden",
        [](RunConfig& c, std::string_view v) {
          c.model.hidden = parse_int_list(v);
          for (int h : c.model.hidden) {
            if (h < 1) throw InvalidArgument("hidden widths must be positive");
          }
        },
        [](const RunConfig& c) { return join(c.model.hidden); });
    add("model.dlrm_hidden",
        [](RunConfig& c, std::string_view v) {
          c.model.dlrm_hidden = v.empty() ? std::vector<int>{} : parse_int_list(v);
          for (int h : c.model.dlrm_hidden) {
            if (h < 1) throw InvalidArgument("hidden widths must be positive");
          }
        },
        [](const RunConfig& c) { return join(c.model.dlrm_hidden); });
    add("model.use_fm", [](RunConfig& c, std::string_view v) { c.model.use_fm = parse_bool(v); },
        [](const RunConfig& c) { return std::string(c.model.use_fm ? "true" : "false"); });
    add("model.l2",
        [](RunConfig& c, std::string_view v) {
          c.model.l2 = parse_number<double>(v);
          if (!(c.model.l2 >= 0.0)) throw InvalidArgument("must be non-negative");
        },
        [](const RunConfig& c) { return fmt_real(c.model.l2); });
    add("model.slope",
        [](RunConfig& c, std::string_view v) {
          c.model.slope = parse_number<double>(v);
          if (!(c.model.slope > 0.0 && c.model.slope < 1.0)) throw InvalidArgument("must lie in (0, 1)");
        },
        [](const RunConfig& c) { return fmt_real(c.model.slope); });
    add("model.numeric_fields",
        [](RunConfig& c, std::string_view v) {
          if (v == "all") {
            c.model.numeric_fields.reset();
          } else if (v == "none") {
            c.model.numeric_fields = std::vector<int>{};
          } else {
            c.model.numeric_fields = parse_int_list(v);
          }
        },
        [](const RunConfig& c) {
          if (!c.model.numeric_fields) return std::string("all");
          if (c.model.numeric_fields->empty()) return std::string("none");
          return join(*c.model.numeric_fields);
        });
    // autodis
    add("autodis.buckets", [](RunConfig& c, std::string_view v) { c.model.autodis.buckets = parse_positive(v); },
        [](const RunConfig& c) { return std::to_string(c.model.autodis.buckets); });
    add("autodis.alpha",
        [](RunConfig& c, std::string_view v) {
          const double a = parse_number<double>(v);
          if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("must lie in [0, 1]");
          c.model.autodis.alpha = a;
        },
        [](const RunConfig& c) { return fmt_real(c.model.autodis.alpha); });
    add("autodis.tau",
        [](RunConfig& c, std::string_view v) {
          const double tau = parse_number<double>(v);
          if (!(tau > 0.0)) throw InvalidArgument("must be positive");
          c.model.autodis.tau = tau;
        },
        [](const RunConfig& c) { return fmt_real(c.model.autodis.tau); });
    add("autodis.epsilon",
        [](RunConfig& c, std::string_view v) {
          const double e = parse_number<double>(v);
          if (!(e >= 0.0)) throw InvalidArgument("must be non-negative (0 selects tau/2)");
          c.model.autodis.epsilon = e;
        },
        [](const RunConfig& c) { return fmt_real(c.model.autodis.epsilon); });
    add("autodis.aggregation",
        [](RunConfig& c, std::string_view v) {
          c.model.autodis.aggregation.kind = parse_aggregation_kind(v);
        },
        [](const RunConfig& c) { return std::string(to_string(c.model.autodis.aggregation.kind)); });
    add("autodis.top_k",
        [](RunConfig& c, std::string_view v) { c.model.autodis.aggregation.top_k = parse_positive(v); },
        [](const RunConfig& c) { return std::to_string(c.model.autodis.aggregation.top_k); });
    add("autodis.temperature_hidden",
        [](RunConfig& c, std::string_view v) { c.model.autodis.temperature_hidden = parse_positive(v); },
        [](const RunConfig& c) { return std::to_string(c.model.autodis.temperature_hidden); });
    add("autodis.adaptive_tau",
        [](RunConfig& c, std::string_view v) { c.model.autodis.adaptive_tau = parse_bool(v); },
        [](const RunConfig& c) { return std::string(c.model.autodis.adaptive_tau ? "true" : "false"); });
    add("autodis.shared_temperature",
        [](RunConfig& c, std::string_view v) { c.model.autodis.shared_temperature = parse_bool(v); },
        [](const RunConfig& c) {
          return std::string(c.model.autodis.shared_temperature ? "true" : "false");
        });
    add("autodis.bias", [](RunConfig& c, std::string_view v) { c.model.autodis.bias = parse_bool(v); },
        [](const RunConfig& c) { return std::string(c.model.autodis.bias ? "true" : "false"); });
    // hard discretization
    add("hard.buckets",
        [](RunConfig& c, std::string_view v) {
          c.model.hard_buckets = parse_int_list(v);
          for (int h : c.model.hard_buckets) {
            if (h < 1) throw InvalidArgument("bucket counts must be positive");
          }
        },
        [](const RunConfig& c) { return join(c.model.hard_buckets); });
    add("hard.ld_shift", [](RunConfig& c, std::string_view v) { c.model.ld_shift = parse_bool(v); },
        [](const RunConfig& c) { return std::string(c.model.ld_shift ? "true" : "false"); });
    // train
    add("train.epochs", [](RunConfig& c, std::string_view v) { c.train.epochs = parse_positive(v); },
        [](const RunConfig& c) { return std::to_string(c.train.epochs); });
    add("train.batch_size",
        [](RunConfig& c, std::string_view v) { c.train.batch_size = static_cast<std::size_t>(parse_positive(v)); },
        [](const RunConfig& c) { return std::to_string(c.train.batch_size); });
    add("train.lr",
        [](RunConfig& c, std::string_view v) {
          c.train.lr = parse_number<double>(v);
          if (!(c.train.lr >= 0.0)) throw InvalidArgument("must be non-negative");
        },
        [](const RunConfig& c) { return fmt_real(c.train.lr); });
    add("train.seed", [](RunConfig& c, std::string_view v) { c.train.seed = parse_number<std::uint64_t>(v); },
        [](const RunConfig& c) { return std::to_string(c.train.seed); });
    add("train.patience", [](RunConfig& c, std::string_view v) { c.train.patience = parse_positive(v); },
        [](const RunConfig& c) { return std::to_string(c.train.patience); });
    add("train.beta1", [](RunConfig& c, std::string_view v) { c.train.beta1 = parse_number<double>(v); },
        [](const RunConfig& c) { return fmt_real(c.train.beta1); });
    add("train.beta2", [](RunConfig& c, std::string_view v) { c.train.beta2 = parse_number<double>(v); },
        [](const RunConfig& c) { return fmt_real(c.train.beta2); });
    add("train.eps", [](RunConfig& c, std::string_view v) { c.train.eps = parse_number<double>(v); },
        [](const RunConfig& c) { return fmt_real(c.train.eps); });
    add("train.max_steps",
        [](RunConfig& c, std::string_view v) { c.train.max_steps = parse_number<std::size_t>(v); },
        [](const RunConfig& c) { return std::to_string(c.train.max_steps); });
    // synthetic data
    add("synth.samples",
        [](RunConfig& c, std::string_view v) { c.synth.samples = parse_number<std::size_t>(v); },
        [](const RunConfig& c) { return std::to_string(c.synth.samples); });
    add("synth.numerical",
        [](RunConfig& c, std::string_view v) { c.synth.numerical_fields = parse_number<std::size_t>(v); },
        [](const RunConfig& c) { return std::to_string(c.synth.numerical_fields); });
    add("synth.categorical",
        [](RunConfig& c, std::string_view v) { c.synth.categorical_fields = parse_number<std::size_t>(v); },
        [](const RunConfig& c) { return std::to_string(c.synth.categorical_fields); });
    add("synth.vocab", [](RunConfig& c, std::string_view v) { c.synth.vocab_size = parse_positive(v); },
        [](const RunConfig& c) { return std::to_string(c.synth.vocab_size); });
    add("synth.informative",
        [](RunConfig& c, std::string_view v) { c.synth.informative_field = parse_number<std::size_t>(v); },
        [](const RunConfig& c) { return std::to_string(c.synth.informative_field); });
    add("synth.family", [](RunConfig& c, std::string_view v) { c.synth.family = parse_label_family(v); },
        [](const RunConfig& c) { return std::string(to_string(c.synth.family)); });
    add("synth.a", [](RunConfig& c, std::string_view v) { c.synth.a = parse_number<double>(v); },
        [](const RunConfig& c) { return fmt_real(c.synth.a); });
    add("synth.b", [](RunConfig& c, std::string_view v) { c.synth.b = parse_number<double>(v); },
        [](const RunConfig& c) { return fmt_real(c.synth.b); });
    add("synth.c", [](RunConfig& c, std::string_view v) { c.synth.c = parse_number<double>(v); },
        [](const RunConfig& c) { return fmt_real(c.synth.c); });
    add("synth.categorical_effect",
        [](RunConfig& c, std::string_view v) { c.synth.categorical_effect = parse_number<double>(v); },
        [](const RunConfig& c) { return fmt_real(c.synth.categorical_effect); });
    add("synth.seed", [](RunConfig& c, std::string_view v) { c.synth_seed = parse_number<std::uint64_t>(v); },
        [](const RunConfig& c) { return std::to_string(c.synth_seed); });
    // output
    add("output.dir", [](RunConfig& c, std::string_view v) { c.output_dir = v; },
        [](const RunConfig& c) { return c.output_dir; });
    return t;
  }();
  return table;
}

const KeySpec* find_key(const std::string& key) {
  for (const KeySpec& k : key_table()) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

void apply(RunConfig& config, const std::string& key, const std::string& value) {
  const KeySpec* spec = find_key(key);
  if (spec == nullptr) throw ConfigError(key, fmt::format("unknown config key '{}'", key));
  try {
    spec->set(config, value);
  } catch (const Error& e) {
    throw ConfigError(key, fmt::format("invalid value '{}' for '{}': {}", value, key, e.what()));
  }
}

bool is_model_key(const std::string& key) {
  return key.starts_with("model.") || key.starts_with("autodis.") || key.starts_with("hard.");
}

}  // namespace

ConfigEntries parse_config_text(std::istream& in) {
  ConfigEntries entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(view), fmt::format("config line {}: expected 'key = value'", lineno));
    }
    entries.emplace_back(std::string(trim(view.substr(0, eq))), std::string(trim(view.substr(eq + 1))));
  }
  return entries;
}

ConfigEntries read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", fmt::format("cannot open config file '{}'", path.string()));
  return parse_config_text(in);
}

RunConfig resolve_config(const ConfigEntries& entries) {
  RunConfig config;
  for (const auto& [key, value] : entries) apply(config, key, value);
  return config;
}

ConfigEntries config_entries(const RunConfig& config) {
  ConfigEntries out;
  for (const KeySpec& k : key_table()) out.emplace_back(k.key, k.get(config));
  return out;
}

std::string render_config(const ConfigEntries& entries) {
  std::string out;
  for (const auto& [key, value] : entries) out += fmt::format("{} = {}\n", key, value);
  return out;
}

ConfigEntries model_entries(const ModelConfig& model) {
  RunConfig c;
  c.model = model;
  ConfigEntries out;
  for (const KeySpec& k : key_table()) {
    if (is_model_key(k.key)) out.emplace_back(k.key, k.get(c));
  }
  return out;
}

void apply_model_entries(const ConfigEntries& entries, ModelConfig& model) {
  RunConfig c;
  c.model = model;
  for (const auto& [key, value] : entries) {
    if (!is_model_key(key)) throw ConfigError(key, fmt::format("'{}' is not a model key", key));
    apply(c, key, value);
  }
  model = c.model;
}

bool is_known_key(const std::string& key) { return find_key(key) != nullptr; }

}  // namespace autodis
