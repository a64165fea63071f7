// Copyright 2026 The ASAS Authors.
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

#include <fstream>
#include <iterator>
#include <sstream>

#include "asas/cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  json result() const { return json::parse(out).at("result"); }
  json error() const { return json::parse(err); }
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "asas");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = asas::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<json> jsonl(const fs::path& p) {
  std::vector<json> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

const std::vector<std::string> kTiny = {"--hidden", "6", "--embedding-dim", "6",
                                        "--attention-dim", "6", "--max-summary-len", "12"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("usage errors are reported as json with exit code 2") {
  const Run unknown = cli({"frobnicate"});
  CHECK(unknown.code == asas::cli::kUsage);
  CHECK(unknown.error().at("status") == "error");
  CHECK(unknown.error().at("error").at("kind") == "usage");

  const Run missing = cli({"rank"});
  CHECK(missing.code == asas::cli::kUsage);

  const auto dir = asas::testing::temp_dir("cli-config");
  std::ofstream(dir / "bad.json") << R"({"seed": 3, "colour": "blue"})";
  const Run bad = cli({"train", "--config", (dir / "bad.json").string()});
  CHECK(bad.code == asas::cli::kUsage);
  CHECK(bad.error().at("error").at("message").get<std::string>().find("colour") !=
        std::string::npos);
}

TEST_CASE("data and checkpoint errors use their own exit codes") {
  const auto dir = asas::testing::temp_dir("cli-errors");
  const Run data = cli({"train", "--train", (dir / "nope.jsonl").string()});
  CHECK(data.code == asas::cli::kData);
  CHECK(data.error().at("command") == "train");

  std::ofstream(dir / "x.ckpt") << "not a checkpoint";
  std::ofstream(dir / "d.jsonl") << "";
  const Run ckpt = cli({"rank", "--checkpoint", (dir / "x.ckpt").string(), "--data",
                        (dir / "d.jsonl").string()});
  CHECK(ckpt.code == asas::cli::kCheckpoint);
}

TEST_CASE("end-to-end pipeline") {
  const auto dir = asas::testing::temp_dir("cli-e2e");
  const std::string data = (dir / "data").string(), ckpts = (dir / "ckpt").string(),
                    outdir = (dir / "out").string();

  const Run synth = cli({"synth", "--domain", "A", "--out", data, "--questions", "6",
                         "--dev-questions", "3", "--test-questions", "3", "--seed", "2"});
  REQUIRE(synth.code == 0);
  CHECK(synth.result().at("train") == 6);

  const Run vocab = cli({"build-vocab", "--data", data + "/train.jsonl", "--out",
                         (dir / "vocab.json").string(), "--seed", "2"});
  REQUIRE(vocab.code == 0);
  CHECK(jsonl(dir / "vocab.json").at(0).contains("config_hash"));

  const auto train_args = with({"train", "--train", data + "/train.jsonl", "--dev",
                                data + "/dev.jsonl", "--epochs", "2", "--patience", "5",
                                "--batch-size", "4", "--seed", "2", "--checkpoint-dir", ckpts,
                                "--output-dir", outdir},
                               kTiny);
  const Run train = cli(train_args);
  REQUIRE_MESSAGE(train.code == 0, train.err);
  CHECK(fs::exists(fs::path(ckpts) / "epoch_1.ckpt"));
  CHECK(fs::exists(fs::path(ckpts) / "best.ckpt"));
  const auto metrics = jsonl(fs::path(outdir) / "metrics.jsonl");
  REQUIRE(metrics.size() == 2);
  CHECK(metrics[0].at("seed") == 2);
  CHECK(metrics[0].contains("config_hash"));
  const std::string ckpt = (fs::path(ckpts) / "epoch_2.ckpt").string();

  SUBCASE("rank reproduces the logged dev MAP") {
    const Run rank = cli({"rank", "--checkpoint", ckpt, "--data", data + "/dev.jsonl", "--out",
                          (dir / "scores.jsonl").string(), "--report",
                          (dir / "report.json").string()});
    REQUIRE_MESSAGE(rank.code == 0, rank.err);
    CHECK(rank.result().at("map").get<double>() == metrics[1].at("dev_map").get<double>());
    CHECK(rank.result().at("by_length").is_array());
    CHECK(jsonl(dir / "scores.jsonl").at(0).contains("config_hash"));

    const Run eval = cli({"eval-rank", "--scores", (dir / "scores.jsonl").string(), "--data",
                          data + "/dev.jsonl", "--report", (dir / "eval.json").string()});
    REQUIRE(eval.code == 0);
    CHECK(eval.result().at("map") == rank.result().at("map"));
  }

  SUBCASE("summaries are deterministic and evaluate") {
    const std::string a = (dir / "s1.jsonl").string(), b = (dir / "s2.jsonl").string();
    REQUIRE(cli({"summarize", "--checkpoint", ckpt, "--data", data + "/test.jsonl", "--out", a,
                 "--relevant-only"})
                .code == 0);
    REQUIRE(cli({"summarize", "--checkpoint", ckpt, "--data", data + "/test.jsonl", "--out", b,
                 "--relevant-only"})
                .code == 0);
    CHECK(slurp(a) == slurp(b));
    const auto recs = jsonl(a);
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].contains("p_gen"));
    const Run rouge =
        cli({"eval-sum", "--predictions", a, "--data", data + "/test.jsonl",
             "--report", (dir / "rouge.json").string()});
    REQUIRE_MESSAGE(rouge.code == 0, rouge.err);
    CHECK(rouge.result().contains("rouge_1"));
  }

  SUBCASE("transfer with everything frozen ranks like the source") {
    const std::string tdir = (dir / "transfer").string();
    const Run tr = cli(with({"transfer", "--checkpoint", ckpt, "--freeze", "all", "--train",
                             data + "/train.jsonl", "--dev", data + "/dev.jsonl",
                             "--checkpoint-dir", tdir, "--output-dir", tdir, "--seed", "2"},
                            kTiny));
    REQUIRE_MESSAGE(tr.code == 0, tr.err);
    const std::string best = (fs::path(tdir) / "best.ckpt").string();
    REQUIRE(cli({"rank", "--checkpoint", best, "--data", data + "/dev.jsonl", "--out",
                 (dir / "t.jsonl").string(), "--report", (dir / "t.json").string()})
                .code == 0);
    REQUIRE(cli({"rank", "--checkpoint", ckpt, "--data", data + "/dev.jsonl", "--out",
                 (dir / "s.jsonl").string(), "--report", (dir / "s.json").string()})
                .code == 0);
    const auto t = jsonl(dir / "t.jsonl"), s = jsonl(dir / "s.jsonl");
    REQUIRE(t.size() == s.size());
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i].at("scores") == s[i].at("scores"));
  }

  SUBCASE("outputs never overwrite inputs") {
    const Run clash = cli({"rank", "--checkpoint", ckpt, "--data", data + "/dev.jsonl", "--out",
                           data + "/dev.jsonl"});
    CHECK(clash.code == asas::cli::kUsage);
  }

  SUBCASE("training twice gives identical checkpoints") {
    const std::string first = slurp(ckpt);
    fs::remove_all(ckpts);
    fs::remove_all(outdir);
    REQUIRE(cli(train_args).code == 0);
    CHECK(first == slurp(ckpt));
  }
}

TEST_CASE("config file and environment precedence") {
  const auto dir = asas::testing::temp_dir("cli-precedence");
  const std::string data = (dir / "data").string();
  REQUIRE(cli({"synth", "--out", data, "--questions", "4", "--dev-questions", "2",
               "--test-questions", "2"})
              .code == 0);
  std::ofstream(dir / "c.json") << R"({"seed": 11})";
  const Run r = cli({"build-vocab", "--config", (dir / "c.json").string(), "--data",
                     data + "/train.jsonl", "--out", (dir / "v1.json").string()});
  REQUIRE(r.code == 0);
  CHECK(jsonl(dir / "v1.json").at(0).at("seed") == 11);
  const Run flag = cli({"build-vocab", "--config", (dir / "c.json").string(), "--seed", "5",
                        "--data", data + "/train.jsonl", "--out", (dir / "v2.json").string()});
  REQUIRE(flag.code == 0);
  CHECK(jsonl(dir / "v2.json").at(0).at("seed") == 5);
}
