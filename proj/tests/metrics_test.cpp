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

#include <cmath>
#include <fstream>
#include <random>

#include "asas/metrics.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

using namespace asas;

namespace {

RankedList ranked(std::vector<int> labels_in_order, std::size_t length = 50) {
  std::vector<RankedCandidate> c;
  for (std::size_t k = 0; k < labels_in_order.size(); ++k) {
    c.push_back({"a" + std::to_string(k), 1.0 - 0.1 * static_cast<double>(k),
                 labels_in_order[k], length});
  }
  return RankedList("q", c);
}

}  // namespace

TEST_CASE("single relevant item at rank one") {
  const std::vector<RankedList> lists{ranked({1})};
  const RankMetrics m = rank_metrics(lists);
  CHECK(m.map == 1.0);
  CHECK(m.mrr == 1.0);
  CHECK(m.p_at_1 == 1.0);
}

TEST_CASE("hand-enumerated average precision") {
  const RankedList a = ranked({1, 0, 1});
  CHECK(average_precision(a) == doctest::Approx(5.0 / 6).epsilon(1e-15));
  CHECK(reciprocal_rank(a) == 1.0);

  const RankedList b = ranked({0, 0, 1});
  CHECK(average_precision(b) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(reciprocal_rank(b) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  const std::vector<RankedList> lists{b};
  CHECK(rank_metrics(lists).p_at_1 == 0.0);
}

TEST_CASE("ties are broken by ascending answer id") {
  const RankedList l("q", {{"b", 0.5, 0, 1}, {"a", 0.5, 1, 1}, {"c", 0.9, 0, 1}});
  CHECK(l.candidates()[0].answer_id == "c");
  CHECK(l.candidates()[1].answer_id == "a");
}

TEST_CASE("lists without a relevant candidate are skipped") {
  const std::vector<RankedList> lists{ranked({0, 0}), ranked({0, 1})};
  const RankMetrics m = rank_metrics(lists);
  CHECK(m.skipped == 1);
  CHECK(m.questions == 1);
  CHECK(m.map == 0.5);
  const std::vector<RankedList> none{ranked({0})};
  CHECK_THROWS_AS(rank_metrics(none), std::invalid_argument);
}

TEST_CASE("ranking metrics agree with the brute-force oracle") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<RankedList> lists;
    double map = 0, mrr = 0, p1 = 0;
    std::size_t n = 0;
    for (int q = 0; q < 4; ++q) {
      const auto items = oracle::random_items(rng);
      lists.push_back(oracle::to_list("q" + std::to_string(q), items));
      if (!oracle::any_relevant(items)) continue;
      ++n;
      map += oracle::ap(items);
      mrr += oracle::rr(items);
      p1 += oracle::top_is_relevant(items) ? 1 : 0;
    }
    if (n == 0) continue;
    const RankMetrics m = rank_metrics(lists);
    CHECK(std::abs(m.map - map / n) <= 1e-12);
    CHECK(std::abs(m.mrr - mrr / n) <= 1e-12);
    CHECK(std::abs(m.p_at_1 - p1 / n) <= 1e-12);
  }
}

TEST_CASE("ranking is invariant under a strictly monotone score transform") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto items = oracle::random_items(rng);
    const RankedList a = oracle::to_list("q", items);
    for (auto& it : items) it.score = std::exp(3 * it.score) - 7;
    const RankedList b = oracle::to_list("q", items);
    REQUIRE(a.candidates().size() == b.candidates().size());
    for (std::size_t k = 0; k < a.candidates().size(); ++k) {
      CHECK(a.candidates()[k].answer_id == b.candidates()[k].answer_id);
    }
  }
}

TEST_CASE("rouge hand counts") {
  const Tokens same{"x", "y", "z"};
  for (auto v : {RougeVariant::kRouge1, RougeVariant::kRouge2, RougeVariant::kRougeL}) {
    const RougeScore s = rouge(same, same, v);
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
    CHECK(s.f1 == 1.0);
  }
  const RougeScore r1 = rouge_n({"the", "cat"}, {"the", "cat", "sat"}, 1);
  CHECK(r1.precision == 1.0);
  CHECK(r1.recall == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(r1.f1 == doctest::Approx(0.8).epsilon(1e-15));

  CHECK(rouge_n({"a", "b"}, {"b", "a"}, 2).f1 == 0.0);
  const RougeScore rl = rouge_l({"a", "b"}, {"b", "a"});
  CHECK(rl.precision == 0.5);
  CHECK(rl.recall == 0.5);
  CHECK(rl.f1 == 0.5);
}

TEST_CASE("rouge agrees with the brute-force oracle") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const Tokens c = oracle::random_tokens(rng, 9), r = oracle::random_tokens(rng, 9);
    for (std::size_t n : {1, 2}) {
      const RougeScore got = rouge_n(c, r, n);
      const oracle::Prf want = oracle::rouge_n(c, r, n);
      CHECK(std::abs(got.precision - want.p) <= 1e-12);
      CHECK(std::abs(got.recall - want.r) <= 1e-12);
      CHECK(std::abs(got.f1 - want.f) <= 1e-12);
    }
    const RougeScore got = rouge_l(c, r);
    const oracle::Prf want = oracle::rouge_l(c, r);
    CHECK(std::abs(got.precision - want.p) <= 1e-12);
    CHECK(std::abs(got.recall - want.r) <= 1e-12);
    CHECK(std::abs(got.f1 - want.f) <= 1e-12);
  }
}

TEST_CASE("rouge report macro-averages") {
  const std::vector<Tokens> c{{"the", "cat"}, {"a"}}, r{{"the", "cat", "sat"}, {"a"}};
  const RougeReport rep = rouge_report(c, r);
  CHECK(rep.pairs == 2);
  CHECK(rep.rouge1.f1 == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("accuracy by length") {
  SUBCASE("one bucket, all correct") {
    const std::vector<RankedList> lists{ranked({1, 0}), ranked({1}), ranked({1, 0, 0})};
    const auto b = accuracy_by_length(lists);
    REQUIRE(b.size() == 1);
    CHECK(b[0].lower == 0);
    CHECK(b[0].upper == 100);
    CHECK(b[0].p_at_1 == 1.0);
  }
  SUBCASE("two buckets at one half") {
    const std::vector<RankedList> lists{ranked({1, 0}, 20), ranked({0, 1}, 30),
                                        ranked({1, 0}, 250), ranked({0, 1}, 299)};
    const auto b = accuracy_by_length(lists);
    REQUIRE(b.size() == 2);
    CHECK(b[0].p_at_1 == 0.5);
    CHECK(b[1].p_at_1 == 0.5);
    CHECK(b[1].lower == 200);
  }
  SUBCASE("edges belong to the upper bucket") {
    const std::size_t edges[] = {100, 200, 300, 400};
    CHECK(bucket_index(99, edges) == 0);
    CHECK(bucket_index(100, edges) == 1);
    CHECK(bucket_index(400, edges) == 4);
  }
}

TEST_CASE("length buckets agree with a brute-force regrouping") {
  std::mt19937_64 rng(13);
  const std::vector<std::size_t> edges = kDefaultLengthEdges;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<oracle::Item>> raw;
    std::vector<RankedList> lists;
    for (int q = 0; q < 30; ++q) {
      raw.push_back(oracle::random_items(rng, 600));
      lists.push_back(oracle::to_list("q" + std::to_string(q), raw.back()));
    }
    const auto want = oracle::regroup(raw, edges);
    const auto got = accuracy_by_length(lists, edges);
    REQUIRE(got.size() == want.size());
    std::size_t k = 0;
    for (const auto& [bucket, counts] : want) {
      CHECK(got[k].lower == (bucket == 0 ? 0 : edges[bucket - 1]));
      CHECK(got[k].questions == counts.first);
      CHECK(got[k].correct == counts.second);
      ++k;
    }
  }
}

TEST_CASE("score files join with dataset labels") {
  const auto dir = asas::testing::temp_dir("metrics-scores");
  const auto data = asas::testing::tiny_data(2, 3, 100);
  {
    std::ofstream out(dir / "scores.jsonl");
    for (const auto& ex : data.examples) {
      std::vector<RankedCandidate> c;
      for (const auto& cand : ex.candidates) c.push_back({cand.answer_id, 0.1 * cand.label, 0, 0});
      out << score_record(RankedList(ex.question_id, c)).dump() << "\n";
    }
  }
  const auto lists = attach_labels(read_score_file(dir / "scores.jsonl"), data.examples);
  CHECK(rank_metrics(lists).map == 1.0);

  std::ofstream(dir / "bad.jsonl") << R"({"question_id":")" << data.examples[0].question_id
                                   << R"(","scores":{"nope":0.5}})" << "\n";
  CHECK_THROWS_AS(attach_labels(read_score_file(dir / "bad.jsonl"), data.examples),
                  DatasetError);
}
