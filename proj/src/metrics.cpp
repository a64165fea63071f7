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

#include "asas/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace asas {

using nlohmann::json;

RankedList::RankedList(std::string question_id, std::vector<RankedCandidate> candidates)
    : question_id_(std::move(question_id)), candidates_(std::move(candidates)) {
  if (candidates_.empty()) throw std::invalid_argument("ranked list needs a candidate");
  std::sort(candidates_.begin(), candidates_.end(),
            [](const RankedCandidate& a, const RankedCandidate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.answer_id < b.answer_id;
            });
}

bool RankedList::has_relevant() const {
  return std::any_of(candidates_.begin(), candidates_.end(),
                     [](const RankedCandidate& c) { return c.label == 1; });
}

double average_precision(const RankedList& list) {
  double hits = 0.0, total = 0.0;
  const auto& c = list.candidates();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k].label != 1) continue;
    hits += 1.0;
    total += hits / static_cast<double>(k + 1);
  }
  return hits == 0.0 ? 0.0 : total / hits;
}

double reciprocal_rank(const RankedList& list) {
  const auto& c = list.candidates();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k].label == 1) return 1.0 / static_cast<double>(k + 1);
  }
  return 0.0;
}

RankMetrics rank_metrics(std::span<const RankedList> lists) {
  if (lists.empty()) throw std::invalid_argument("rank_metrics: no ranked lists");
  RankMetrics m;
  for (const RankedList& list : lists) {
    if (!list.has_relevant()) {
      ++m.skipped;
      continue;
    }
    ++m.questions;
    m.map += average_precision(list);
    m.mrr += reciprocal_rank(list);
    m.p_at_1 += list.candidates().front().label == 1 ? 1.0 : 0.0;
  }
  if (m.questions == 0) {
    throw std::invalid_argument("rank_metrics: no list has a relevant candidate");
  }
  const double n = static_cast<double>(m.questions);
  m.map /= n;
  m.mrr /= n;
  m.p_at_1 /= n;
  return m;
}

namespace {

RougeScore make_score(double overlap, std::size_t cand_total, std::size_t ref_total) {
  RougeScore s;
  s.precision = cand_total == 0 ? 0.0 : overlap / static_cast<double>(cand_total);
  s.recall = ref_total == 0 ? 0.0 : overlap / static_cast<double>(ref_total);
  const double denom = s.precision + s.recall;
  s.f1 = denom == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / denom;
  return s;
}

std::map<Tokens, std::size_t> ngram_counts(const Tokens& tokens, std::size_t n) {
  std::map<Tokens, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Tokens(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                    tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

}  // namespace

RougeScore rouge_n(const Tokens& candidate, const Tokens& reference, std::size_t n) {
  if (n == 0) throw std::invalid_argument("rouge_n: n must be positive");
  const auto cand = ngram_counts(candidate, n);
  const auto ref = ngram_counts(reference, n);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  const std::size_t cand_total = candidate.size() >= n ? candidate.size() - n + 1 : 0;
  const std::size_t ref_total = reference.size() >= n ? reference.size() - n + 1 : 0;
  return make_score(static_cast<double>(overlap), cand_total, ref_total);
}

RougeScore rouge_l(const Tokens& candidate, const Tokens& reference) {
  const std::size_t m = candidate.size(), n = reference.size();
  std::vector<std::size_t> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      cur[j] = candidate[i - 1] == reference[j - 1] ? prev[j - 1] + 1
                                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return make_score(static_cast<double>(prev[n]), m, n);
}

RougeScore rouge(const Tokens& candidate, const Tokens& reference, RougeVariant variant) {
  switch (variant) {
    case RougeVariant::kRouge1: return rouge_n(candidate, reference, 1);
    case RougeVariant::kRouge2: return rouge_n(candidate, reference, 2);
    case RougeVariant::kRougeL: return rouge_l(candidate, reference);
  }
  throw std::invalid_argument("unknown ROUGE variant");
}

RougeReport rouge_report(std::span<const Tokens> candidates, std::span<const Tokens> references) {
  if (candidates.size() != references.size()) {
    throw std::invalid_argument("rouge_report: candidate/reference count mismatch");
  }
  RougeReport r;
  r.pairs = candidates.size();
  if (r.pairs == 0) return r;
  auto accumulate = [](RougeScore& acc, const RougeScore& s) {
    acc.precision += s.precision;
    acc.recall += s.recall;
    acc.f1 += s.f1;
  };
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    accumulate(r.rouge1, rouge_n(candidates[i], references[i], 1));
    accumulate(r.rouge2, rouge_n(candidates[i], references[i], 2));
    accumulate(r.rougeL, rouge_l(candidates[i], references[i]));
  }
  const double n = static_cast<double>(r.pairs);
  for (RougeScore* s : {&r.rouge1, &r.rouge2, &r.rougeL}) {
    s->precision /= n;
    s->recall /= n;
    s->f1 /= n;
  }
  return r;
}

std::size_t gold_length(const RankedList& list) {
  const RankedCandidate* gold = nullptr;
  for (const RankedCandidate& c : list.candidates()) {
    if (c.label == 1 && (!gold || c.answer_id < gold->answer_id)) gold = &c;
  }
  if (!gold) throw std::invalid_argument("gold_length: list has no relevant candidate");
  return gold->length;
}

std::size_t bucket_index(std::size_t length, std::span<const std::size_t> edges) {
  return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), length) -
                                  edges.begin());
}

std::vector<LengthBucket> accuracy_by_length(std::span<const RankedList> lists,
                                             std::span<const std::size_t> edges) {
  if (!std::is_sorted(edges.begin(), edges.end())) {
    throw std::invalid_argument("accuracy_by_length: edges must be ascending");
  }
  std::vector<LengthBucket> all(edges.size() + 1);
  for (std::size_t b = 0; b < all.size(); ++b) {
    all[b].lower = b == 0 ? 0 : edges[b - 1];
    all[b].upper = b < edges.size() ? edges[b] : 0;
  }
  for (const RankedList& list : lists) {
    if (!list.has_relevant()) continue;
    LengthBucket& bucket = all[bucket_index(gold_length(list), edges)];
    ++bucket.questions;
    if (list.candidates().front().label == 1) ++bucket.correct;
  }
  std::vector<LengthBucket> out;
  for (LengthBucket& b : all) {
    if (b.questions == 0) continue;
    b.p_at_1 = static_cast<double>(b.correct) / static_cast<double>(b.questions);
    out.push_back(b);
  }
  return out;
}

json to_json(const RankMetrics& m) {
  return json{{"map", m.map},           {"mrr", m.mrr},
              {"p_at_1", m.p_at_1},     {"questions", m.questions},
              {"skipped", m.skipped}};
}

json to_json(const RougeScore& s) {
  return json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

json to_json(const RougeReport& r) {
  return json{{"rouge_1", to_json(r.rouge1)},
              {"rouge_2", to_json(r.rouge2)},
              {"rouge_l", to_json(r.rougeL)},
              {"pairs", r.pairs}};
}

json to_json(std::span<const LengthBucket> buckets) {
  json out = json::array();
  for (const LengthBucket& b : buckets) {
    json jb{{"lower", b.lower}, {"questions", b.questions},
            {"correct", b.correct}, {"p_at_1", b.p_at_1}};
    jb["upper"] = b.upper == 0 ? json(nullptr) : json(b.upper);
    out.push_back(std::move(jb));
  }
  return out;
}

json score_record(const RankedList& list) {
  json scores = json::object();
  for (const RankedCandidate& c : list.candidates()) scores[c.answer_id] = c.score;
  return json{{"question_id", list.question_id()}, {"scores", std::move(scores)}};
}

std::vector<ScoreRecord> read_score_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot read score file " + path.string());
  std::vector<ScoreRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    try {
      const json j = json::parse(line);
      ScoreRecord r;
      r.question_id = j.at("question_id").get<std::string>();
      for (const auto& [id, score] : j.at("scores").items()) {
        r.scores[id] = score.get<double>();
      }
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw DatasetError(where + ": " + e.what());
    }
  }
  return out;
}

std::vector<RankedList> attach_labels(std::span<const ScoreRecord> scores,
                                      std::span<const QAExample> dataset) {
  std::unordered_map<std::string, const QAExample*> by_id;
  for (const QAExample& ex : dataset) by_id.emplace(ex.question_id, &ex);
  std::vector<RankedList> out;
  for (const ScoreRecord& r : scores) {
    auto it = by_id.find(r.question_id);
    if (it == by_id.end()) throw DatasetError("unknown question_id " + r.question_id);
    std::vector<RankedCandidate> cands;
    for (const Candidate& c : it->second->candidates) {
      auto s = r.scores.find(c.answer_id);
      if (s == r.scores.end()) continue;
      cands.push_back({c.answer_id, s->second, c.label, c.answer.size()});
    }
    if (cands.size() != r.scores.size()) {
      throw DatasetError("question " + r.question_id + " scores an unknown answer_id");
    }
    out.emplace_back(r.question_id, std::move(cands));
  }
  return out;
}

}  // namespace asas
