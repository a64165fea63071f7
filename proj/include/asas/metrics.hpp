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

// Ranking metrics (MAP, MRR, P@1), ROUGE-1/2/L and accuracy by answer length.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "asas/corpus.hpp"

namespace asas {

struct RankedCandidate {
  std::string answer_id;
  double score = 0.0;
  int label = 0;
  std::size_t length = 0;  // answer tokens
};

// Candidates sorted by descending score, ties by ascending answer_id.
class RankedList {
 public:
  RankedList(std::string question_id, std::vector<RankedCandidate> candidates);

  const std::string& question_id() const { return question_id_; }
  const std::vector<RankedCandidate>& candidates() const { return candidates_; }
  bool has_relevant() const;

 private:
  std::string question_id_;
  std::vector<RankedCandidate> candidates_;
};

double average_precision(const RankedList& list);
double reciprocal_rank(const RankedList& list);

struct RankMetrics {
  double map = 0.0;
  double mrr = 0.0;
  double p_at_1 = 0.0;
  std::size_t questions = 0;  // lists that contributed
  std::size_t skipped = 0;    // lists without a relevant candidate
};

// Throws std::invalid_argument when no list has a relevant candidate.
RankMetrics rank_metrics(std::span<const RankedList> lists);

enum class RougeVariant { kRouge1, kRouge2, kRougeL };

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

RougeScore rouge_n(const Tokens& candidate, const Tokens& reference, std::size_t n);
RougeScore rouge_l(const Tokens& candidate, const Tokens& reference);
RougeScore rouge(const Tokens& candidate, const Tokens& reference, RougeVariant variant);

struct RougeReport {
  RougeScore rouge1, rouge2, rougeL;  // macro-averaged over pairs
  std::size_t pairs = 0;
};

RougeReport rouge_report(std::span<const Tokens> candidates, std::span<const Tokens> references);

struct LengthBucket {
  std::size_t lower = 0;
  std::size_t upper = 0;  // exclusive; 0 means unbounded
  std::size_t questions = 0;
  std::size_t correct = 0;
  double p_at_1 = 0.0;
};

inline const std::vector<std::size_t> kDefaultLengthEdges = {100, 200, 300, 400};

// Length of the gold answer used for bucketing: the relevant candidate with
// the smallest answer_id.
std::size_t gold_length(const RankedList& list);
std::size_t bucket_index(std::size_t length, std::span<const std::size_t> edges);

// P@1 per gold-answer length bucket. Buckets with no question are omitted.
std::vector<LengthBucket> accuracy_by_length(
    std::span<const RankedList> lists,
    std::span<const std::size_t> edges = kDefaultLengthEdges);

nlohmann::json to_json(const RankMetrics& m);
nlohmann::json to_json(const RougeScore& s);
nlohmann::json to_json(const RougeReport& r);
nlohmann::json to_json(std::span<const LengthBucket> buckets);

// Ranking JSONL record: {"question_id": ..., "scores": {answer_id: score}}.
nlohmann::json score_record(const RankedList& list);
struct ScoreRecord {
  std::string question_id;
  std::map<std::string, double> scores;
};
std::vector<ScoreRecord> read_score_file(const std::filesystem::path& path);
// Joins scores with labels and answer lengths from the dataset. Throws
// DatasetError when a scored answer_id is unknown.
std::vector<RankedList> attach_labels(std::span<const ScoreRecord> scores,
                                      std::span<const QAExample> dataset);

}  // namespace asas
