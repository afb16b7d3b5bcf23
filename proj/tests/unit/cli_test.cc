#include <gtest/gtest.h>

#ifdef GRANTMINE_HAVE_CLI

#include <algorithm>
#include <sstream>

#include "grantmine_cli/commands.h"
#include "json.hpp"
#include "test_util.h"

namespace grantmine::cli {
namespace {

using grantmine::testing::ReadFile;
using grantmine::testing::TempDir;
using grantmine::testing::WriteText;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t CountLines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

const char* kThreeDocs =
    R"({"id":"a","text":"gene editing","scores":{"ic":5.0},"grant_type":"Ideas"})" "\n"
    R"({"id":"b","text":"cell growth","scores":{"ic":4.0},"grant_type":"Ideas"})" "\n"
    R"({"id":"c","text":"plant study","scores":{"ic":6.0},"grant_type":"Synergy"})" "\n";

TEST(Cli, StatsPrintsCount) {
  TempDir dir;
  WriteText(dir.path() / "c.jsonl", kThreeDocs);
  const Result r = Invoke({"--corpus", (dir.path() / "c.jsonl").string(), "--out",
                        (dir.path() / "out").string(), "stats"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("count 3\n"), std::string::npos);
  const auto summary = nlohmann::json::parse(ReadFile(dir.path() / "out" / "stats.json"));
  EXPECT_EQ(summary.at("command"), "stats");
  EXPECT_TRUE(summary.contains("config_hash"));
  EXPECT_TRUE(summary.contains("seed"));
}

TEST(Cli, GrantTypeFilter) {
  TempDir dir;
  WriteText(dir.path() / "c.jsonl", kThreeDocs);
  const Result r = Invoke({"--corpus", (dir.path() / "c.jsonl").string(), "--out",
                        dir.path().string(), "--grant-type", "Ideas", "stats"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("count 2\n"), std::string::npos);
}

TEST(Cli, InvalidConfigIsOneLineUsageError) {
  TempDir dir;
  WriteText(dir.path() / "c.jsonl", kThreeDocs);
  WriteText(dir.path() / "bad.ini", "[encoding]\nscheme = bm25\n");
  const std::string corpus = (dir.path() / "c.jsonl").string();
  const std::vector<std::vector<std::string>> cases = {
      {"--corpus", corpus, "--config", (dir.path() / "bad.ini").string(), "stats"},
      {"--corpus", corpus, "--set", "nosuch.key=1", "stats"},
      {"--corpus", corpus, "--seed", "minus-one", "stats"},
      {"--corpus", (dir.path() / "missing.jsonl").string(), "stats"},
      {"stats"},
      {"frobnicate"},
  };
  for (const auto& args : cases) {
    const Result r = Invoke(args);
    EXPECT_EQ(r.code, kExitUsage) << args.back();
    EXPECT_EQ(CountLines(r.err), 1u) << r.err;
    EXPECT_EQ(r.err.rfind("grantmine: error: ", 0), 0u) << r.err;
  }
}

TEST(Cli, SynthGridAndReruns) {
  TempDir dir;
  const std::string corpus = (dir.path() / "synth" / "corpus.jsonl").string();
  const std::vector<std::string> common{"--seed", "3", "--set", "synth.doc_length_mean=30",
                                        "--set", "model.n_estimators=8"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = common;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  ASSERT_EQ(Invoke(with({"--out", (dir.path() / "synth").string(), "synth", "--n-docs", "300"})).code,
            kExitOk);

  for (const char* run : {"a", "b"}) {
    const std::string out = (dir.path() / run).string();
    const Result grid = Invoke(with({"--corpus", corpus, "--out", out, "grid"}));
    ASSERT_EQ(grid.code, kExitOk) << grid.err;
    const Result mod = Invoke(with({"--corpus", corpus, "--out", out, "moderate"}));
    ASSERT_EQ(mod.code, kExitOk) << mod.err;
    const Result top = Invoke(with({"--out", out, "top-features", "--k", "20"}));
    ASSERT_EQ(top.code, kExitOk) << top.err;
  }
  const std::string grid = ReadFile(dir.path() / "a" / "grid.csv");
  EXPECT_EQ(CountLines(grid), 37u);
  for (const char* file : {"grid.csv", "grid.json", "moderate.csv", "moderate.json",
                           "model.json", "top_features.csv", "top_features.json"}) {
    EXPECT_EQ(ReadFile(dir.path() / "a" / file), ReadFile(dir.path() / "b" / file)) << file;
  }
  EXPECT_EQ(CountLines(ReadFile(dir.path() / "a" / "moderate.csv")), 8u);

  // Every row carries the same config hash as the summary.
  const auto summary = nlohmann::json::parse(ReadFile(dir.path() / "a" / "grid.json"));
  const std::string hash = summary.at("config_hash");
  std::istringstream rows(grid);
  std::string line;
  std::getline(rows, line);
  while (std::getline(rows, line)) EXPECT_NE(line.find("," + hash + ",3"), std::string::npos);

  // A different seed changes the reports.
  const std::string other = (dir.path() / "c").string();
  std::vector<std::string> args = with({"--corpus", corpus, "--out", other, "grid"});
  args[1] = "4";
  ASSERT_EQ(Invoke(args).code, kExitOk);
  EXPECT_NE(ReadFile(dir.path() / "c" / "grid.csv"), grid);
}

TEST(Cli, GridOnBundledCorpus) {
  TempDir dir;
  const Result r = Invoke({"--corpus", GRANTMINE_SAMPLE_CORPUS, "--out", dir.path().string(),
                           "--set", "model.n_estimators=10", "grid"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(CountLines(ReadFile(dir.path() / "grid.csv")), 37u);
}

TEST(Cli, ExampleConfigParses) {
  TempDir dir;
  const Result r = Invoke({"--config", GRANTMINE_EXAMPLE_CONFIG, "--corpus", GRANTMINE_SAMPLE_CORPUS,
                           "--out", dir.path().string(), "stats"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("count 300\n"), std::string::npos);
}

TEST(Cli, TrainThenTopFeatures) {
  TempDir dir;
  const std::string corpus = (dir.path() / "corpus.jsonl").string();
  ASSERT_EQ(Invoke({"--out", dir.path().string(), "--set", "synth.doc_length_mean=30", "synth",
                 "--n-docs", "300"})
                .code,
            kExitOk);
  const Result train = Invoke({"--corpus", corpus, "--out", dir.path().string(), "--set",
                            "model.n_estimators=5", "train", "--encoding", "idf-presence"});
  ASSERT_EQ(train.code, kExitOk) << train.err;
  const std::string eval = ReadFile(dir.path() / "train_eval.csv");
  EXPECT_EQ(eval.rfind("set,accuracy,f1,", 0), 0u);
  const Result top = Invoke({"--out", dir.path().string(), "--model",
                          (dir.path() / "model.json").string(), "top-features", "--k", "5"});
  ASSERT_EQ(top.code, kExitOk) << top.err;
  EXPECT_LE(CountLines(ReadFile(dir.path() / "top_features.csv")), 6u);
}

TEST(Cli, TuneWritesTrace) {
  TempDir dir;
  const std::string corpus = (dir.path() / "corpus.jsonl").string();
  ASSERT_EQ(Invoke({"--out", dir.path().string(), "--set", "synth.doc_length_mean=20", "synth",
                 "--n-docs", "200"})
                .code,
            kExitOk);
  const Result tune = Invoke({"--corpus", corpus, "--out", dir.path().string(), "--set",
                           "tuning.folds=3", "tune", "--classifier", "dt", "--init-points", "2",
                           "--n-iter", "2"});
  ASSERT_EQ(tune.code, kExitOk) << tune.err;
  EXPECT_EQ(CountLines(ReadFile(dir.path() / "tune_trace.csv")), 5u);
}

}  // namespace
}  // namespace grantmine::cli

#endif  // GRANTMINE_HAVE_CLI
