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

#include "autodis/commands.h"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "autodis/analysis.h"
#include "autodis/checkpoint.h"
#include "autodis/config.h"
#include "autodis/error.h"
#include "autodis/feature_context.h"
#include "autodis/gradcheck.h"
#include "autodis/model.h"
#include "autodis/synthetic.h"
#include "autodis/trainer.h"

namespace autodis {
namespace {

namespace fs = std::filesystem;

constexpr double kGradTolerance = 1e-4;
constexpr std::size_t kDeskLimit = 8;

// Turns leftover "--section.key=value" / "--section.key value" arguments into
// config entries.
ConfigEntries parse_overrides(const std::vector<std::string>& extras) {
  ConfigEntries entries;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (!arg.starts_with("--") || arg.find('.') == std::string::npos) {
      throw ConfigError(arg, fmt::format("unexpected argument '{}'", arg));
    }
    const std::string body = arg.substr(2);
    const std::size_t eq = body.find('=');
    if (eq != std::string::npos) {
      entries.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    } else if (i + 1 < extras.size() && !extras[i + 1].starts_with("--")) {
      entries.emplace_back(body, extras[i + 1]);
      ++i;
    } else {
      throw ConfigError(body, fmt::format("override '{}' has no value", body));
    }
  }
  return entries;
}

RunConfig load_run_config(const std::string& path, const ConfigEntries& base,
                          const std::vector<std::string>& extras) {
  ConfigEntries entries = base;
  if (!path.empty()) {
    if (!fs::exists(path)) throw InvalidArgument(fmt::format("config file '{}' not found", path));
    const ConfigEntries file = read_config_file(path);
    entries.insert(entries.end(), file.begin(), file.end());
  }
  const ConfigEntries overrides = parse_overrides(extras);
  entries.insert(entries.end(), overrides.begin(), overrides.end());
  return resolve_config(entries);
}

struct PreparedData {
  Dataset train;
  Dataset valid;
  Dataset test;
  FeatureContext ctx;
};

Schema declared_schema(const RunConfig& config) {
  if (config.data.train.empty()) return synthetic_schema(config.synth);
  if (config.data.schema.empty()) throw ConfigError("data.schema", "data.schema is required with data.train");
  return Schema::parse(config.data.schema);
}

// Training data, validation split and fitted statistics. The same config
// always reproduces the same splits.
PreparedData prepare_data(const RunConfig& config) {
  PreparedData data;
  const Schema schema = declared_schema(config);
  Vocabulary vocab(schema);
  Dataset full;
  if (config.data.train.empty()) {
    full = gen_synthetic(config.synth, config.synth_seed);
  } else {
    full = load_tabular(config.data.train, schema, config.data.delimiter,
                        config.data.categorical_mode, &vocab);
  }
  vocab.freeze();
  if (!config.data.valid.empty()) {
    data.train = std::move(full);
    data.valid = load_tabular(config.data.valid, schema, config.data.delimiter,
                              config.data.categorical_mode, &vocab);
  } else {
    std::tie(data.train, data.valid) =
        split_holdout(full, config.data.valid_fraction, config.train.seed);
  }
  if (!config.data.test.empty()) {
    data.test = load_tabular(config.data.test, schema, config.data.delimiter,
                             config.data.categorical_mode, &vocab);
  }
  data.ctx = FeatureContext::fit(data.train, config.data.categorical_mode, std::move(vocab));
  if (config.model.encoder == NumericEncoder::kHard) {
    data.ctx.fit_discretizers(data.train, config.model.hard_kind, config.model.hard_buckets,
                                config.model.ld_shift);
  }
  return data;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& extras,
              std::ostream& out) {
  const RunConfig config = load_run_config(config_path, {}, extras);
  const PreparedData data = prepare_data(config);
  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  write_text(dir / "resolved.cfg", render_config(config_entries(config)));
  data.ctx.save(dir / "stats.txt");

  std::ostringstream metrics;
  metrics << "epoch\tsplit\tmetric\tvalue\n";
  const auto log_epoch = [&](const EpochRecord& r) {
    metrics << fmt::format("{}\ttrain\tloss\t{}\n", r.epoch, r.train_loss)
            << fmt::format("{}\tvalid\tauc\t{}\n", r.epoch, r.valid_auc)
            << fmt::format("{}\tvalid\tlogloss\t{}\n", r.epoch, r.valid_logloss);
    out << fmt::format("epoch {} train_loss {:.6f} valid_auc {:.6f} valid_logloss {:.6f}\n",
                       r.epoch, r.train_loss, r.valid_auc, r.valid_logloss);
  };
  const TrainResult result =
      train(data.train, data.valid, config.model, config.train, data.ctx, log_epoch);
  metrics << fmt::format("{}\tbest\tauc\t{}\n", result.best_epoch, result.best_valid_auc);
  write_text(dir / "metrics.tsv", metrics.str());
  save_checkpoint(dir / "model.ckpt", data.ctx.schema, config.model, result.params);

  if (result.diverged) {
    out << fmt::format("diverged: {}\n", result.divergence_reason);
    return kExitDiverged;
  }
  out << fmt::format("best_epoch {} best_valid_auc {}\n", result.best_epoch,
                     result.best_valid_auc);
  return kExitOk;
}

fs::path sibling(const std::string& checkpoint, const char* name) {
  return fs::path(checkpoint).parent_path() / name;
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw InvalidArgument(fmt::format("{} path is required", what));
  if (!fs::is_regular_file(path)) throw InvalidArgument(fmt::format("{} '{}' not found", what, path));
}

struct LoadedModel {
  FeatureContext ctx;
  Checkpoint checkpoint;
};

LoadedModel load_model(const std::string& checkpoint, std::string stats) {
  require_file(checkpoint, "checkpoint");
  if (stats.empty()) stats = sibling(checkpoint, "stats.txt").string();
  require_file(stats, "stats file");
  LoadedModel model;
  model.ctx = FeatureContext::load(fs::path(stats));
  model.checkpoint = load_checkpoint(fs::path(checkpoint), model.ctx);
  return model;
}

int cmd_eval(const std::string& checkpoint, const std::string& stats, const std::string& data_path,
             std::string config_path, const std::vector<std::string>& extras, std::ostream& out) {
  LoadedModel model = load_model(checkpoint, stats);
  if (config_path.empty()) {
    const fs::path snapshot = sibling(checkpoint, "resolved.cfg");
    if (fs::is_regular_file(snapshot)) config_path = snapshot.string();
  }
  const RunConfig config = load_run_config(config_path, {}, extras);
  const Schema& stored = model.checkpoint.schema;

  Dataset dataset;
  if (!data_path.empty() || !config.data.valid.empty()) {
    const Schema schema = config.data.schema.empty() ? stored : Schema::parse(config.data.schema);
    if (!(schema == stored)) {
      throw DataError(fmt::format("schema mismatch: checkpoint has '{}', data declares '{}'",
                                  stored.to_string(), schema.to_string()));
    }
    Vocabulary vocab = model.ctx.vocabulary;
    dataset = load_tabular(data_path.empty() ? config.data.valid : data_path, schema,
                           config.data.delimiter, model.ctx.mode, &vocab);
  } else {
    if (!(declared_schema(config) == stored)) {
      throw DataError(fmt::format("schema mismatch: checkpoint has '{}', config declares '{}'",
                                  stored.to_string(), declared_schema(config).to_string()));
    }
    dataset = prepare_data(config).valid;
  }

  const ModelConfig& model_config = model.checkpoint.config;
  const MetricsReport report = evaluate(dataset, model.checkpoint.params, model_config, model.ctx);
  std::vector<std::size_t> ids(std::min(dataset.size(), config.train.batch_size));
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  const Complexity complexity =
      measure_complexity(model.checkpoint.params, model_config, model.ctx, make_batch(dataset, ids));
  out << fmt::format("auc {}\n", report.auc) << fmt::format("logloss {}\n", report.logloss)
      << fmt::format("param_count {}\n", complexity.param_count)
      << fmt::format("batch_inference_ms {}\n", complexity.batch_inference_ms);
  return kExitOk;
}

ConfigEntries gradcheck_defaults() {
  return {
      {"model.encoder", "autodis"},    {"model.embed_dim", "8"},
      {"model.hidden", "8,4"},         {"model.use_fm", "true"},
      {"model.l2", "1e-3"},            {"autodis.buckets", "5"},
      {"autodis.tau", "1"},            {"autodis.temperature_hidden", "4"},
      {"hard.buckets", "5"},           {"train.batch_size", "4"},
      {"synth.numerical", "2"},        {"synth.categorical", "2"},
      {"synth.vocab", "4"},
  };
}

// Random desk-scale batch drawn straight from the schema; labels alternate so
// both classes are present.
Dataset gradcheck_data(const Schema& schema, std::size_t size, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset dataset{schema, {}};
  for (std::size_t n = 0; n < size; ++n) {
    Instance inst;
    for (std::size_t c = 0; c < schema.num_categorical(); ++c) {
      std::uniform_int_distribution<int> id(0, schema.vocab_size(c) - 1);
      inst.categorical_ids.push_back(id(rng));
    }
    for (std::size_t j = 0; j < schema.num_numerical(); ++j) inst.numerical_values.push_back(unit(rng));
    inst.label = static_cast<int>(n % 2);
    dataset.instances.push_back(std::move(inst));
  }
  return dataset;
}

int cmd_gradcheck(const std::string& config_path, std::uint64_t seed, double step,
                  const std::vector<std::string>& extras, std::ostream& out) {
  const RunConfig config = load_run_config(config_path, gradcheck_defaults(), extras);
  const ModelConfig& model = config.model;
  std::size_t buckets = 0;
  if (model.encoder == NumericEncoder::kAutoDis) buckets = static_cast<std::size_t>(model.autodis.buckets);
  if (model.encoder == NumericEncoder::kHard) {
    for (int h : model.hard_buckets) buckets = std::max(buckets, static_cast<std::size_t>(h));
  }
  if (config.train.batch_size > kDeskLimit || static_cast<std::size_t>(model.embed_dim) > kDeskLimit ||
      buckets > kDeskLimit) {
    throw InvalidArgument("gradcheck requires desk-scale config (batch, embed_dim, buckets <= 8)");
  }

  Rng rng(seed);
  const Schema schema = declared_schema(config);
  const Dataset dataset = gradcheck_data(schema, config.train.batch_size, rng);
  FeatureContext ctx = FeatureContext::fit(dataset, CategoricalMode::kDictionary, Vocabulary(schema));
  if (model.encoder == NumericEncoder::kHard) {
    ctx.fit_discretizers(dataset, model.hard_kind, model.hard_buckets, model.ld_shift);
  }
  ModelParams params = init_params(model, ctx, rng);
  std::vector<std::size_t> ids(dataset.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  const Batch batch = make_batch(dataset, ids);

  const ForwardResult fwd = forward(batch, params, model, ctx);
  const ModelParams grads = backward(fwd.cache, batch.labels, params, model);
  const auto objective = [&] {
    return loss(predict(batch, params, model, ctx), batch.labels, params, model.l2);
  };
  std::vector<CheckedParam> checked;
  const std::vector<TensorRef> values = named_tensors(params);
  const std::vector<ConstTensorRef> analytic = named_tensors(grads);
  for (std::size_t t = 0; t < values.size(); ++t) {
    checked.push_back({values[t].name, values[t].values, analytic[t].values});
  }
  const std::vector<GradCheckReport> reports = finite_diff_check(objective, checked, step);
  bool ok = true;
  for (const GradCheckReport& r : reports) {
    const bool pass = r.max_rel_error < kGradTolerance;
    ok = ok && pass;
    out << fmt::format("{} max_rel_error {:.3e} {}\n", r.parameter_name, r.max_rel_error,
                       pass ? "ok" : "FAIL");
  }
  out << (ok ? "gradcheck passed\n" : "gradcheck failed\n");
  return ok ? kExitOk : kExitFailure;
}

int cmd_synth(const std::string& config_path, std::string output,
              const std::vector<std::string>& extras, std::ostream& out) {
  const RunConfig config = load_run_config(config_path, {}, extras);
  const Dataset dataset = gen_synthetic(config.synth, config.synth_seed);
  if (output.empty()) {
    fs::create_directories(config.output_dir);
    output = (fs::path(config.output_dir) / "synthetic.tsv").string();
  }
  std::ofstream file(output, std::ios::binary);
  if (!file) throw DataError(fmt::format("cannot write '{}'", output));
  write_tabular(file, dataset, config.data.delimiter);
  out << fmt::format("wrote {} instances to {}\n", dataset.size(), output);
  out << fmt::format("schema {}\n", dataset.schema.to_string());
  return kExitOk;
}

Vector parse_grid(const std::string& spec) {
  if (spec.find(',') == std::string::npos) {
    std::size_t pos = 0;
    long n = 0;
    try {
      n = std::stol(spec, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != spec.size() || n < 1) throw InvalidArgument(fmt::format("bad grid '{}'", spec));
    return unit_grid(static_cast<std::size_t>(n));
  }
  Vector grid;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size()) throw InvalidArgument(fmt::format("bad grid value '{}'", item));
    grid.push_back(v);
  }
  return grid;
}

int cmd_export(const std::string& checkpoint, const std::string& stats, const std::string& kind,
               int field, const std::string& grid_spec, std::string output, std::ostream& out) {
  if (kind != "embeddings" && kind != "softdist") {
    throw InvalidArgument(fmt::format("unknown export kind '{}' (expected embeddings or softdist)", kind));
  }
  const LoadedModel model = load_model(checkpoint, stats);
  const Vector grid = parse_grid(grid_spec);
  const Checkpoint& ckpt = model.checkpoint;
  const Table table =
      kind == "embeddings"
          ? export_embeddings(ckpt.params, ckpt.config, model.ctx, field, grid)
          : export_soft_distribution(ckpt.params, ckpt.config, model.ctx, field, grid);
  if (output.empty()) output = sibling(checkpoint, "").string() + fmt::format("{}_field{}.tsv", kind, field);
  std::ofstream file(output);
  if (!file) throw DataError(fmt::format("cannot write '{}'", output));
  table.write(file);
  out << fmt::format("wrote {} rows to {}\n", table.rows.size(), output);
  return kExitOk;
}

int cmd_ablate(const std::string& config_path, const std::string& order_spec, std::size_t seeds,
               const std::vector<std::string>& extras, std::ostream& out) {
  const RunConfig config = load_run_config(config_path, {}, extras);
  const PreparedData data = prepare_data(config);
  std::vector<int> order;
  if (order_spec.empty()) {
    for (std::size_t j = 0; j < data.ctx.schema.num_numerical(); ++j) {
      order.push_back(data.ctx.schema.numerical_field(j));
    }
  } else {
    order = resolve_field_order(order_spec, data.ctx.schema);
  }
  const Dataset& eval_set = data.test.empty() ? data.valid : data.test;
  const std::vector<AblationStep> steps = ablation_fields(
      data.train, data.valid, eval_set, config.model, config.train, data.ctx, order, seeds);

  std::ostringstream table;
  table << "step\tfields\tauc_mean\tauc_std\tlogloss_mean\n";
  for (std::size_t s = 0; s < steps.size(); ++s) {
    std::string fields = "-";
    if (!steps[s].fields.empty()) fields = fmt::format("{}", fmt::join(steps[s].fields, ","));
    table << fmt::format("{}\t{}\t{}\t{}\t{}\n", s, fields, steps[s].mean.auc, steps[s].auc_std,
                         steps[s].mean.logloss);
  }
  fs::create_directories(config.output_dir);
  write_text(fs::path(config.output_dir) / "ablation.tsv", table.str());
  out << table.str();
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"AutoDis CTR toolkit", "autodis"};
  app.require_subcommand(1);

  std::string config_path;
  std::string checkpoint;
  std::string stats;
  std::string data_path;
  std::string output;
  std::string kind;
  std::string grid = "250";
  std::string order;
  int field = -1;
  std::uint64_t seed = 1;
  std::size_t seeds = 5;
  double step = 1e-4;

  CLI::App* train_cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
  train_cmd->add_option("-c,--config", config_path, "Run config file");

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  eval_cmd->add_option("--stats", stats, "Stats file (default: next to the checkpoint)");
  eval_cmd->add_option("--data", data_path, "Dataset to score");
  eval_cmd->add_option("-c,--config", config_path, "Run config (default: resolved.cfg next to the checkpoint)");

  CLI::App* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference check of every gradient");
  grad_cmd->add_option("-c,--config", config_path, "Run config file");
  grad_cmd->add_option("--seed", seed, "Seed for data and parameters");
  grad_cmd->add_option("--step", step, "Central-difference step");

  CLI::App* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset");
  synth_cmd->add_option("-c,--config", config_path, "Run config file");
  synth_cmd->add_option("-o,--output", output, "Output path");

  CLI::App* export_cmd = app.add_subcommand("export", "Export embeddings or soft distributions");
  export_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  export_cmd->add_option("--stats", stats, "Stats file (default: next to the checkpoint)");
  export_cmd->add_option("--kind", kind, "embeddings or softdist")->required();
  export_cmd->add_option("--field", field, "Numerical field id")->required();
  export_cmd->add_option("--grid", grid, "Point count on [0, 1] or a comma list of values");
  export_cmd->add_option("-o,--output", output, "Output path");

  CLI::App* ablate_cmd = app.add_subcommand("ablate", "Cumulative numerical-field ablation");
  ablate_cmd->add_option("-c,--config", config_path, "Run config file");
  ablate_cmd->add_option("--order", order, "Field ids \"0,3,1\" or random:<seed>");
  ablate_cmd->add_option("--seeds", seeds, "Runs per step");

  for (CLI::App* sub : {train_cmd, grad_cmd, synth_cmd, ablate_cmd, eval_cmd}) sub->allow_extras();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*train_cmd) return cmd_train(config_path, train_cmd->remaining(), out);
    if (*eval_cmd) {
      return cmd_eval(checkpoint, stats, data_path, config_path, eval_cmd->remaining(), out);
    }
    if (*grad_cmd) return cmd_gradcheck(config_path, seed, step, grad_cmd->remaining(), out);
    if (*synth_cmd) return cmd_synth(config_path, output, synth_cmd->remaining(), out);
    if (*export_cmd) return cmd_export(checkpoint, stats, kind, field, grid, output, out);
    if (*ablate_cmd) return cmd_ablate(config_path, order, seeds, ablate_cmd->remaining(), out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DivergenceError& e) {
    err << "diverged: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace autodis
