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

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "autodis/commands.h"
#include "test_util.h"

namespace autodis {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Value following `key ` on its own line of `text`.
std::string field_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with(key + " ")) return line.substr(key.size() + 1);
  }
  return "";
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

const std::vector<std::string> kSmallRun = {
    "--synth.samples=1500", "--synth.numerical=2",   "--synth.categorical=1",
    "--model.embed_dim=4",  "--model.hidden=8",      "--autodis.buckets=5",
    "--autodis.tau=0.5",    "--autodis.temperature_hidden=4", "--train.epochs=2",
    "--train.batch_size=64"};

CliRun train_small(const fs::path& dir, std::vector<std::string> extra = {}) {
  std::vector<std::string> args{"train", "--output.dir=" + dir.string()};
  args.insert(args.end(), kSmallRun.begin(), kSmallRun.end());
  args.insert(args.end(), extra.begin(), extra.end());
  return run(args);
}

TEST(CliCases, TrainWritesArtifacts) {
  const fs::path dir = test::scratch_dir();
  const CliRun r = train_small(dir);
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"model.ckpt", "stats.txt", "resolved.cfg", "metrics.tsv"}) {
    EXPECT_TRUE(fs::is_regular_file(dir / name)) << name;
  }
  EXPECT_NE(r.out.find("epoch 1 "), std::string::npos);
  EXPECT_FALSE(field_value(r.out, "best_epoch").empty());
}

TEST(CliCases, ConfigFileAndOverride) {
  const fs::path dir = test::scratch_dir();
  test::write_file(dir / "run.cfg", "train.seed = 3\nmodel.embed_dim = 4\n");
  const CliRun r = train_small(dir, {"-c", (dir / "run.cfg").string(), "--train.seed=7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string snapshot = test::read_file(dir / "resolved.cfg");
  EXPECT_NE(snapshot.find("train.seed = 7\n"), std::string::npos);
}

TEST(CliCases, UnknownKeyExitsTwo) {
  const fs::path dir = test::scratch_dir();
  const CliRun r = train_small(dir, {"--autodis.aggegation=max_pooling"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("autodis.aggegation"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir / "model.ckpt"));
}

TEST(CliCases, BadValueExitsTwo) {
  const fs::path dir = test::scratch_dir();
  EXPECT_EQ(train_small(dir, {"--autodis.tau=-1"}).code, 2);
  EXPECT_EQ(train_small(dir, {"--model.encoder", "nope"}).code, 2);
  EXPECT_EQ(run({"train", "-c", (dir / "missing.cfg").string()}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(CliCases, EvalReproducesBestAuc) {
  const fs::path dir = test::scratch_dir();
  const CliRun t = train_small(dir);
  ASSERT_EQ(t.code, 0) << t.err;
  const CliRun e = run({"eval", "--checkpoint", (dir / "model.ckpt").string()});
  ASSERT_EQ(e.code, 0) << e.err;
  const std::vector<std::string> out = lines(e.out);
  ASSERT_EQ(out.size(), 4u) << e.out;
  EXPECT_TRUE(out[0].starts_with("auc "));
  EXPECT_TRUE(out[1].starts_with("logloss "));
  EXPECT_TRUE(out[2].starts_with("param_count "));
  EXPECT_TRUE(out[3].starts_with("batch_inference_ms "));
  EXPECT_EQ(field_value(e.out, "auc"), field_value(t.out, "best_epoch").substr(
                                           field_value(t.out, "best_epoch").find("best_valid_auc ") + 15));
}

TEST(CliCases, EvalOnDataFile) {
  const fs::path dir = test::scratch_dir();
  ASSERT_EQ(train_small(dir).code, 0);
  const CliRun s = run({"synth", "-o", (dir / "extra.tsv").string(), "--synth.samples=300",
                        "--synth.numerical=2", "--synth.categorical=1", "--synth.seed=99"});
  ASSERT_EQ(s.code, 0) << s.err;
  const CliRun e = run({"eval", "--checkpoint", (dir / "model.ckpt").string(), "--data",
                        (dir / "extra.tsv").string()});
  ASSERT_EQ(e.code, 0) << e.err;
  const double auc = std::stod(field_value(e.out, "auc"));
  EXPECT_GT(auc, 0.0);
  EXPECT_LT(auc, 1.0);
}

TEST(CliCases, EvalMissingCheckpointExitsTwo) {
  const fs::path dir = test::scratch_dir();
  const CliRun r = run({"eval", "--checkpoint", (dir / "none.ckpt").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("none.ckpt"), std::string::npos);
}

TEST(CliCases, EvalSchemaMismatchExitsTwo) {
  const fs::path dir = test::scratch_dir();
  ASSERT_EQ(train_small(dir).code, 0);
  const CliRun s = run({"synth", "-o", (dir / "other.tsv").string(), "--synth.samples=200",
                        "--synth.numerical=3", "--synth.categorical=1"});
  ASSERT_EQ(s.code, 0);
  const CliRun e = run({"eval", "--checkpoint", (dir / "model.ckpt").string(), "--data",
                        (dir / "other.tsv").string(), "--data.schema=cat:5,num,num,num"});
  EXPECT_EQ(e.code, 2);
  EXPECT_NE(e.err.find("schema"), std::string::npos) << e.err;
}

TEST(CliCases, GradcheckDefaultsPass) {
  const CliRun r = run({"gradcheck"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("gradcheck passed"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(CliCases, GradcheckHardEncoder) {
  EXPECT_EQ(run({"gradcheck", "--model.encoder=edd"}).code, 0);
  EXPECT_EQ(run({"gradcheck", "--model.encoder=dlrm", "--model.dlrm_hidden=6,4"}).code, 0);
}

TEST(CliCases, GradcheckRejectsLargeBatch) {
  const CliRun r = run({"gradcheck", "--train.batch_size=1024"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("desk-scale"), std::string::npos);
}

TEST(CliCases, SynthIsDeterministic) {
  const fs::path dir = test::scratch_dir();
  const std::vector<std::string> common{"--synth.samples=500", "--synth.numerical=2",
                                        "--synth.seed=11"};
  std::vector<std::string> a{"synth", "-o", (dir / "a.tsv").string()};
  std::vector<std::string> b{"synth", "-o", (dir / "b.tsv").string()};
  a.insert(a.end(), common.begin(), common.end());
  b.insert(b.end(), common.begin(), common.end());
  const CliRun ra = run(a);
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(run(b).code, 0);
  EXPECT_EQ(test::read_file(dir / "a.tsv"), test::read_file(dir / "b.tsv"));
  EXPECT_EQ(lines(test::read_file(dir / "a.tsv")).size(), 500u);
  EXPECT_EQ(field_value(ra.out, "schema"), "num,num");
}

TEST(CliCases, SynthTrainsFromFile) {
  const fs::path dir = test::scratch_dir();
  const CliRun s = run({"synth", "-o", (dir / "data.tsv").string(), "--synth.samples=800",
                        "--synth.numerical=1", "--synth.categorical=1"});
  ASSERT_EQ(s.code, 0);
  const std::string schema = field_value(s.out, "schema");
  const CliRun t = run({"train", "--output.dir=" + (dir / "out").string(),
                        "--data.train=" + (dir / "data.tsv").string(), "--data.schema=" + schema,
                        "--model.embed_dim=4", "--model.hidden=4", "--autodis.buckets=4",
                        "--train.epochs=1"});
  EXPECT_EQ(t.code, 0) << t.err;
}

TEST(CliCases, SynthInvalidSpecExitsTwo) {
  const fs::path dir = test::scratch_dir();
  EXPECT_EQ(run({"synth", "-o", (dir / "x.tsv").string(), "--synth.family=cubic"}).code, 2);
  // Constant logit far from zero gives a single class.
  EXPECT_EQ(run({"synth", "-o", (dir / "x.tsv").string(), "--synth.family=constant",
                 "--synth.c=20"})
                .code,
            2);
}

TEST(CliCases, TrainFromMissingDataExitsTwo) {
  const fs::path dir = test::scratch_dir();
  EXPECT_EQ(run({"train", "--output.dir=" + dir.string(), "--data.train=" + (dir / "nope.tsv").string(),
                 "--data.schema=num"})
                .code,
            2);
  EXPECT_EQ(run({"train", "--output.dir=" + dir.string(), "--data.train=" + (dir / "nope.tsv").string()})
                .code,
            2);
}

TEST(CliCases, ExportEmbeddings) {
  const fs::path dir = test::scratch_dir();
  ASSERT_EQ(train_small(dir).code, 0);
  const CliRun r = run({"export", "--checkpoint", (dir / "model.ckpt").string(), "--kind",
                        "embeddings", "--field", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::vector<std::string> rows = lines(test::read_file(dir / "embeddings_field1.tsv"));
  ASSERT_EQ(rows.size(), 251u);
  EXPECT_EQ(rows[0], "x\te0\te1\te2\te3");
}

TEST(CliCases, ExportSoftDistribution) {
  const fs::path dir = test::scratch_dir();
  ASSERT_EQ(train_small(dir).code, 0);
  const fs::path path = dir / "soft.tsv";
  const CliRun r = run({"export", "--checkpoint", (dir / "model.ckpt").string(), "--kind", "softdist",
                        "--field", "2", "--grid", "0,0.5,1", "-o", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::vector<std::string> rows = lines(test::read_file(path));
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream in(rows[i]);
    double x = 0.0, tau = 0.0, p = 0.0, sum = 0.0;
    in >> x >> tau;
    int columns = 0;
    while (in >> p) {
      sum += p;
      ++columns;
    }
    EXPECT_EQ(columns, 5);
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(CliCases, ExportErrorsExitTwo) {
  const fs::path dir = test::scratch_dir();
  ASSERT_EQ(train_small(dir).code, 0);
  const std::string ckpt = (dir / "model.ckpt").string();
  EXPECT_EQ(run({"export", "--checkpoint", ckpt, "--kind", "embeddings", "--field", "0"}).code, 2);
  EXPECT_EQ(run({"export", "--checkpoint", ckpt, "--kind", "weights", "--field", "1"}).code, 2);
  EXPECT_EQ(run({"export", "--checkpoint", ckpt, "--kind", "embeddings", "--field", "9"}).code, 2);
  EXPECT_EQ(run({"export", "--checkpoint", ckpt, "--kind", "embeddings", "--field", "1", "--grid", "2,x"})
                .code,
            2);
  EXPECT_EQ(run({"export", "--checkpoint", ckpt, "--kind", "embeddings", "--field", "1", "--grid", "0,1.5"})
                .code,
            2);
  EXPECT_EQ(run({"export", "--kind", "embeddings", "--field", "1"}).code, 2);
}

TEST(CliCases, AblateWritesTable) {
  const fs::path dir = test::scratch_dir();
  std::vector<std::string> args{"ablate", "--output.dir=" + dir.string(), "--order", "2,1", "--seeds", "2"};
  args.insert(args.end(), kSmallRun.begin(), kSmallRun.end());
  const CliRun r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const std::vector<std::string> rows = lines(test::read_file(dir / "ablation.tsv"));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "step\tfields\tauc_mean\tauc_std\tlogloss_mean");
  EXPECT_TRUE(rows[1].starts_with("0\t-\t"));
  EXPECT_TRUE(rows[2].starts_with("1\t2\t"));
  EXPECT_TRUE(rows[3].starts_with("2\t2,1\t"));
}

TEST(CliCases, AblateBadOrderExitsTwo) {
  const fs::path dir = test::scratch_dir();
  std::vector<std::string> args{"ablate", "--output.dir=" + dir.string(), "--order", "0"};
  args.insert(args.end(), kSmallRun.begin(), kSmallRun.end());
  EXPECT_EQ(run(args).code, 2);
}

TEST(CliCases, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

}  // namespace
}  // namespace autodis
