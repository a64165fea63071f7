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

// Dataset ingestion, tokenization, vocabulary and the per-example extended
// vocabulary used by the copy mechanism.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "asas/tensor.hpp"

namespace asas {

using Tokens = std::vector<std::string>;

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lowercases ASCII, splits on whitespace, and emits every ASCII punctuation
// character as its own token. Bytes >= 0x80 are kept inside words.
Tokens tokenize(std::string_view text);

// Keeps the first `limit` tokens.
Tokens truncate_head(const Tokens& tokens, std::size_t limit);

class Vocabulary {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;
  static constexpr std::size_t kStart = 2;
  static constexpr std::size_t kStop = 3;
  static constexpr std::size_t kNumSpecials = 4;
  static constexpr std::size_t kDefaultSize = 50000;

  Vocabulary();

  // The `size - 4` most frequent tokens (ties broken lexicographically) plus
  // the four specials. Throws std::invalid_argument when size < 5 or the
  // corpus is empty.
  static Vocabulary build(std::span<const Tokens> corpus,
                          std::size_t size = kDefaultSize);
  // Non-special tokens in id order starting at id 4.
  static Vocabulary from_tokens(const Tokens& tokens,
                                std::vector<std::size_t> counts = {});

  std::size_t size() const { return tokens_.size(); }
  std::size_t id(const std::string& token) const;
  bool contains(const std::string& token) const;
  const std::string& token(std::size_t id) const { return tokens_.at(id); }
  const Tokens& tokens() const { return tokens_; }
  // Corpus frequency of each id (0 for specials).
  const std::vector<std::size_t>& counts() const { return counts_; }

  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json& j);

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  Tokens tokens_;
  std::vector<std::size_t> counts_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct ExtendedEncoding {
  std::vector<std::size_t> ids;           // OOV -> UNK
  std::vector<std::size_t> extended_ids;  // OOV -> |V| + k
  Tokens oovs;                            // in first-occurrence order

  std::size_t extended_size(const Vocabulary& vocab) const {
    return vocab.size() + oovs.size();
  }
};

ExtendedEncoding encode_extended(const Tokens& tokens, const Vocabulary& vocab);
// Inverse of encode_extended given the example's OOV list.
Tokens decode_extended(std::span<const std::size_t> extended_ids,
                       const Vocabulary& vocab, const Tokens& oovs);

struct Candidate {
  std::string answer_id;
  Tokens answer;
  int label = 0;
  std::optional<Tokens> summary;
};

struct QAExample {
  std::string question_id;
  Tokens question;
  std::vector<Candidate> candidates;
};

struct TruncationLimits {
  std::size_t answer = 400;
  std::size_t summary = 100;
  std::size_t question = 60;
};

// Parses one JSONL record. `where` prefixes error messages.
QAExample parse_example(std::string_view line, const TruncationLimits& limits,
                        const std::string& where = "");
// `path` is a JSONL file, or a directory holding `<split>.jsonl`.
std::vector<QAExample> load_dataset(const std::filesystem::path& path,
                                    std::string_view split = "",
                                    const TruncationLimits& limits = {});
nlohmann::json example_to_json(const QAExample& example);
void write_dataset(const std::filesystem::path& path,
                   std::span<const QAExample> examples);

// Token lists of every question, answer and summary, for vocabulary building.
std::vector<Tokens> corpus_token_lists(std::span<const QAExample> examples);

struct EmbeddingMatrix {
  Tensor matrix;  // |V| x dim
  std::size_t matched = 0;
  double coverage = 0.0;  // matched / |V|
};

// Text embeddings, one `token v1 ... vd` line each. Rows for vocabulary
// entries missing from the file are drawn from U[-0.05, 0.05].
EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                const Vocabulary& vocab, std::mt19937_64& rng);

// Model-ready ids for one question/candidate pair.
struct EncodedCandidate {
  std::string answer_id;
  int label = 0;
  std::size_t answer_length = 0;
  ExtendedEncoding answer;
  // Present only when the candidate carries a reference summary.
  // inputs = START + summary (in-vocabulary ids), targets = summary + STOP
  // (extended ids; target OOVs absent from the source map to UNK).
  std::optional<std::vector<std::size_t>> summary_inputs;
  std::optional<std::vector<std::size_t>> summary_targets;
};

struct EncodedQuestion {
  std::string question_id;
  std::vector<std::size_t> question_ids;
  std::vector<EncodedCandidate> candidates;
};

EncodedQuestion encode_example(const QAExample& example, const Vocabulary& vocab);
std::vector<EncodedQuestion> encode_dataset(std::span<const QAExample> examples,
                                            const Vocabulary& vocab);

}  // namespace asas
