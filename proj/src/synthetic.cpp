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

#include "asas/synthetic.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "asas/rng.hpp"

namespace asas {

namespace {

struct Lexicon {
  std::vector<std::string> verbs, nouns, first_steps, second_steps;
};

const Lexicon& lexicon(SyntheticDomain d) {
  static const Lexicon a{
      {"clean", "paint", "fix", "build", "sell", "wash", "cook", "plant", "store", "move"},
      {"car", "table", "fence", "bike", "garden", "window", "boat", "roof", "shirt", "lamp"},
      {"scrub", "sand", "check", "measure", "price", "soak", "heat", "water", "wrap", "lift"},
      {"rinse", "coat", "tighten", "assemble", "list", "dry", "season", "feed", "label", "carry"}};
  static const Lexicon b{
      {"learn", "teach", "write", "sing", "draw", "read", "play", "study", "record", "practice"},
      {"song", "poem", "guitar", "story", "chess", "piano", "lesson", "essay", "map", "speech"},
      {"repeat", "explain", "outline", "hum", "sketch", "skim", "tune", "review", "test", "rehearse"},
      {"memorize", "quiz", "edit", "perform", "shade", "annotate", "improvise", "summarize",
       "replay", "polish"}};
  return d == SyntheticDomain::kA ? a : b;
}

const std::vector<std::string>& fillers() {
  static const std::vector<std::string> f{"usually", "often", "also", "simply", "really",
                                          "just",    "maybe", "always", "quickly", "again"};
  return f;
}

using Combo = std::pair<std::size_t, std::size_t>;  // (verb, noun)

Tokens question_text(SyntheticDomain d, const Lexicon& lx, Combo c) {
  if (d == SyntheticDomain::kA) return {"how", "do", "i", lx.verbs[c.first], "a", lx.nouns[c.second], "?"};
  return {"what", "is", "the", "best", "way", "to", lx.verbs[c.first], lx.nouns[c.second], "?"};
}

Tokens answer_text(SyntheticDomain d, const Lexicon& lx, Combo c, std::size_t n_filler,
                   std::mt19937_64& rng) {
  const std::string& v = lx.verbs[c.first];
  const std::string& n = lx.nouns[c.second];
  const std::string& s1 = lx.first_steps[c.first];
  const std::string& s2 = lx.second_steps[c.first];
  Tokens t;
  if (d == SyntheticDomain::kA) {
    t = {"to", v, "a", n, "you", "should", s1, "the", n, "and", "then", s2, "it", "carefully"};
  } else {
    t = {"the", "best", "way", "to", v, n, "is", "to", s1, "each", n, "slowly", ",", "then", s2,
         "daily"};
  }
  std::uniform_int_distribution<std::size_t> pick(0, fillers().size() - 1);
  for (std::size_t i = 0; i < n_filler; ++i) t.push_back(fillers()[pick(rng)]);
  t.push_back(".");
  return t;
}

Tokens summary_text(SyntheticDomain d, const Lexicon& lx, Combo c) {
  const std::string& n = lx.nouns[c.second];
  const std::string& s1 = lx.first_steps[c.first];
  const std::string& s2 = lx.second_steps[c.first];
  if (d == SyntheticDomain::kA) return {s1, "the", n, "then", s2, "it"};
  return {s1, "each", n, ",", s2, "daily"};
}

std::vector<QAExample> build_split(const SyntheticOptions& o, const std::string& prefix,
                                   std::span<const Combo> questions,
                                   std::span<const Combo> all, std::mt19937_64& rng) {
  const Lexicon& lx = lexicon(o.domain);
  std::uniform_int_distribution<std::size_t> filler(0, o.max_filler);
  std::vector<QAExample> out;
  for (std::size_t qi = 0; qi < questions.size(); ++qi) {
    const Combo q = questions[qi];
    std::vector<Combo> pool;
    for (const Combo& c : all) {
      if (c == q) continue;
      const bool same_verb = c.first == q.first, same_noun = c.second == q.second;
      if (o.hard_negatives ? (same_verb != same_noun) : (!same_verb && !same_noun)) {
        pool.push_back(c);
      }
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    if (pool.size() + 1 < o.candidates) throw std::invalid_argument("too few negatives");

    std::vector<Candidate> cands;
    Candidate pos;
    pos.label = 1;
    pos.answer = answer_text(o.domain, lx, q, filler(rng), rng);
    pos.summary = summary_text(o.domain, lx, q);
    cands.push_back(std::move(pos));
    for (std::size_t k = 0; k + 1 < o.candidates; ++k) {
      Candidate neg;
      neg.answer = answer_text(o.domain, lx, pool[k], filler(rng), rng);
      if (o.summarize_negatives) neg.summary = summary_text(o.domain, lx, pool[k]);
      cands.push_back(std::move(neg));
    }
    std::shuffle(cands.begin(), cands.end(), rng);

    QAExample ex;
    ex.question_id = prefix + std::to_string(qi);
    ex.question = question_text(o.domain, lx, q);
    for (std::size_t k = 0; k < cands.size(); ++k) {
      cands[k].answer_id = ex.question_id + "-a" + std::to_string(k);
    }
    ex.candidates = std::move(cands);
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace

SyntheticSplits make_synthetic(const SyntheticOptions& o) {
  if (o.candidates < 1) throw std::invalid_argument("synthetic corpus needs candidates");
  const Lexicon& lx = lexicon(o.domain);
  std::vector<Combo> all;
  for (std::size_t v = 0; v < lx.verbs.size(); ++v) {
    for (std::size_t n = 0; n < lx.nouns.size(); ++n) all.emplace_back(v, n);
  }
  const std::size_t need =
      o.train_questions + (o.unseen_pairs ? o.dev_questions + o.test_questions : 0);
  if (need > all.size() ||
      (!o.unseen_pairs && std::max(o.dev_questions, o.test_questions) > o.train_questions)) {
    throw std::invalid_argument("synthetic domain has only " + std::to_string(all.size()) +
                                " question templates, " + std::to_string(need) + " requested");
  }
  auto rng = substream(o.seed, o.domain == SyntheticDomain::kA ? "synthetic-a" : "synthetic-b");
  std::vector<Combo> order = all;
  std::shuffle(order.begin(), order.end(), rng);

  const std::string tag = o.domain == SyntheticDomain::kA ? "a" : "b";
  const std::span<const Combo> ord(order);
  const std::span<const Combo> train = ord.subspan(0, o.train_questions);
  SyntheticSplits s;
  s.train = build_split(o, tag + "-train-", train, all, rng);
  if (o.unseen_pairs) {
    s.dev = build_split(o, tag + "-dev-", ord.subspan(o.train_questions, o.dev_questions), all, rng);
    s.test = build_split(o, tag + "-test-",
                         ord.subspan(o.train_questions + o.dev_questions, o.test_questions), all,
                         rng);
  } else {
    // Sample held-out pairs from the training ones, without repeats per split.
    auto held_out = [&](std::size_t n) {
      std::vector<Combo> picked(train.begin(), train.end());
      std::shuffle(picked.begin(), picked.end(), rng);
      picked.resize(std::min(n, picked.size()));
      return picked;
    };
    s.dev = build_split(o, tag + "-dev-", held_out(o.dev_questions), all, rng);
    s.test = build_split(o, tag + "-test-", held_out(o.test_questions), all, rng);
  }
  return s;
}

}  // namespace asas
