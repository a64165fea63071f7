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

#include "asas/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace asas {

using nlohmann::json;

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      out.emplace_back(1, ch);
    } else {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    }
  }
  flush();
  return out;
}

Tokens truncate_head(const Tokens& tokens, std::size_t limit) {
  if (tokens.size() <= limit) return tokens;
  return Tokens(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(limit));
}

// --- Vocabulary ------------------------------------------------------------

Vocabulary::Vocabulary() : tokens_{"<pad>", "<unk>", "<s>", "</s>"}, counts_(4, 0) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
}

Vocabulary Vocabulary::build(std::span<const Tokens> corpus, std::size_t size) {
  if (size < kNumSpecials + 1) {
    throw std::invalid_argument("vocabulary size must be at least 5, got " +
                                std::to_string(size));
  }
  std::map<std::string, std::size_t> freq;
  for (const Tokens& line : corpus) {
    for (const std::string& tok : line) ++freq[tok];
  }
  if (freq.empty()) throw std::invalid_argument("cannot build a vocabulary from an empty corpus");
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  // std::map iteration is lexicographic, so a stable sort by count keeps the
  // lexicographic tie-break.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const Vocabulary specials;
  Tokens kept;
  std::vector<std::size_t> counts;
  for (const auto& [tok, count] : ranked) {
    if (kept.size() + kNumSpecials >= size) break;
    if (specials.contains(tok)) continue;
    kept.push_back(tok);
    counts.push_back(count);
  }
  return from_tokens(kept, std::move(counts));
}

Vocabulary Vocabulary::from_tokens(const Tokens& tokens, std::vector<std::size_t> counts) {
  Vocabulary v;
  if (!counts.empty() && counts.size() != tokens.size()) {
    throw std::invalid_argument("vocabulary counts/tokens length mismatch");
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (v.index_.contains(tokens[i])) {
      throw std::invalid_argument("duplicate vocabulary token '" + tokens[i] + "'");
    }
    v.index_.emplace(tokens[i], v.tokens_.size());
    v.tokens_.push_back(tokens[i]);
    v.counts_.push_back(counts.empty() ? 0 : counts[i]);
  }
  return v;
}

std::size_t Vocabulary::id(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(const std::string& token) const {
  return index_.contains(token);
}

json Vocabulary::to_json() const {
  return json{{"tokens", Tokens(tokens_.begin() + kNumSpecials, tokens_.end())},
              {"counts", std::vector<std::size_t>(counts_.begin() + kNumSpecials,
                                                  counts_.end())}};
}

Vocabulary Vocabulary::from_json(const json& j) {
  auto tokens = j.at("tokens").get<Tokens>();
  std::vector<std::size_t> counts;
  if (j.contains("counts")) counts = j.at("counts").get<std::vector<std::size_t>>();
  return from_tokens(tokens, std::move(counts));
}

// --- extended encoding -----------------------------------------------------

ExtendedEncoding encode_extended(const Tokens& tokens, const Vocabulary& vocab) {
  ExtendedEncoding enc;
  enc.ids.reserve(tokens.size());
  enc.extended_ids.reserve(tokens.size());
  std::unordered_map<std::string, std::size_t> oov_ids;
  for (const std::string& tok : tokens) {
    const std::size_t id = vocab.id(tok);
    enc.ids.push_back(id);
    if (id != Vocabulary::kUnk || vocab.contains(tok)) {
      enc.extended_ids.push_back(id);
      continue;
    }
    auto [it, inserted] = oov_ids.emplace(tok, vocab.size() + enc.oovs.size());
    if (inserted) enc.oovs.push_back(tok);
    enc.extended_ids.push_back(it->second);
  }
  return enc;
}

Tokens decode_extended(std::span<const std::size_t> extended_ids,
                       const Vocabulary& vocab, const Tokens& oovs) {
  Tokens out;
  out.reserve(extended_ids.size());
  for (std::size_t id : extended_ids) {
    if (id < vocab.size()) {
      out.push_back(vocab.token(id));
    } else if (id - vocab.size() < oovs.size()) {
      out.push_back(oovs[id - vocab.size()]);
    } else {
      throw std::out_of_range("extended id " + std::to_string(id) +
                              " beyond the example's OOV list");
    }
  }
  return out;
}

// --- dataset ---------------------------------------------------------------

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& message) {
  throw DatasetError(where.empty() ? message : where + ": " + message);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(where, std::string("missing required field '") + key + "'");
  }
  return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) fail(where, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

QAExample parse_example(std::string_view line, const TruncationLimits& limits,
                        const std::string& where) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    fail(where, std::string("malformed JSON: ") + e.what());
  }
  QAExample ex;
  ex.question_id = require_string(record, "question_id", where);
  ex.question = truncate_head(tokenize(require_string(record, "question", where)),
                              limits.question);
  if (ex.question.empty()) fail(where, "question has no tokens");
  const json& cands = require(record, "candidates", where);
  if (!cands.is_array() || cands.empty()) {
    fail(where, "'candidates' must be a non-empty array");
  }
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const json& c = cands[k];
    const std::string cwhere = where + (where.empty() ? "" : " ") + "candidate " +
                               std::to_string(k);
    Candidate cand;
    cand.answer_id = require_string(c, "answer_id", cwhere);
    cand.answer = truncate_head(tokenize(require_string(c, "text", cwhere)),
                                limits.answer);
    if (cand.answer.empty()) fail(cwhere, "answer text has no tokens");
    const json& label = require(c, "label", cwhere);
    if (!label.is_number_integer() || (label.get<long>() != 0 && label.get<long>() != 1)) {
      fail(cwhere, "label must be 0 or 1, got " + label.dump());
    }
    cand.label = label.get<int>();
    if (c.contains("summary") && !c.at("summary").is_null()) {
      if (!c.at("summary").is_string()) fail(cwhere, "'summary' must be a string");
      cand.summary = truncate_head(tokenize(c.at("summary").get<std::string>()),
                                   limits.summary);
    }
    ex.candidates.push_back(std::move(cand));
  }
  return ex;
}

std::vector<QAExample> load_dataset(const std::filesystem::path& path,
                                    std::string_view split,
                                    const TruncationLimits& limits) {
  std::filesystem::path file = path;
  if (std::filesystem::is_directory(path)) {
    file = path / (std::string(split.empty() ? "train" : split) + ".jsonl");
  }
  std::ifstream in(file);
  if (!in) throw DatasetError("cannot read dataset file " + file.string());
  std::vector<QAExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_example(line, limits, file.filename().string() + ":" +
                                                  std::to_string(line_no)));
  }
  return out;
}

json example_to_json(const QAExample& example) {
  auto join = [](const Tokens& t) {
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) s += ' ';
      s += t[i];
    }
    return s;
  };
  json cands = json::array();
  for (const Candidate& c : example.candidates) {
    json jc{{"answer_id", c.answer_id}, {"text", join(c.answer)}, {"label", c.label}};
    if (c.summary) jc["summary"] = join(*c.summary);
    cands.push_back(std::move(jc));
  }
  return json{{"question_id", example.question_id},
              {"question", join(example.question)},
              {"candidates", std::move(cands)}};
}

void write_dataset(const std::filesystem::path& path,
                   std::span<const QAExample> examples) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write dataset file " + path.string());
  for (const QAExample& ex : examples) out << example_to_json(ex).dump() << '\n';
}

std::vector<Tokens> corpus_token_lists(std::span<const QAExample> examples) {
  std::vector<Tokens> out;
  for (const QAExample& ex : examples) {
    out.push_back(ex.question);
    for (const Candidate& c : ex.candidates) {
      out.push_back(c.answer);
      if (c.summary) out.push_back(*c.summary);
    }
  }
  return out;
}

// --- embeddings ------------------------------------------------------------

EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                const Vocabulary& vocab, std::mt19937_64& rng) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot read embedding file " + path.string());
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string token;
    if (!(ss >> token)) continue;
    std::vector<double> values;
    for (double v; ss >> v;) values.push_back(v);
    if (!ss.eof()) {
      throw DatasetError(path.filename().string() + ":" + std::to_string(line_no) +
                         ": non-numeric vector component");
    }
    if (values.empty()) {
      throw DatasetError(path.filename().string() + ":" + std::to_string(line_no) +
                         ": token without vector components");
    }
    if (dim == 0) dim = values.size();
    if (values.size() != dim) {
      throw DatasetError(path.filename().string() + ":" + std::to_string(line_no) +
                         ": dimension " + std::to_string(values.size()) +
                         " differs from declared dimension " + std::to_string(dim));
    }
    rows.emplace_back(std::move(token), std::move(values));
  }
  if (dim == 0) throw DatasetError("embedding file " + path.string() + " is empty");

  EmbeddingMatrix out;
  out.matrix = Tensor({vocab.size(), dim});
  std::uniform_real_distribution<double> dist(-0.05, 0.05);
  for (double& v : out.matrix.values()) v = dist(rng);
  std::vector<bool> filled(vocab.size(), false);
  for (const auto& [token, values] : rows) {
    if (!vocab.contains(token)) continue;
    const std::size_t id = vocab.id(token);
    if (filled[id]) continue;
    filled[id] = true;
    ++out.matched;
    std::copy(values.begin(), values.end(), out.matrix.row(id).begin());
  }
  out.coverage = static_cast<double>(out.matched) / static_cast<double>(vocab.size());
  return out;
}

// --- model-ready encoding --------------------------------------------------

EncodedQuestion encode_example(const QAExample& example, const Vocabulary& vocab) {
  EncodedQuestion q;
  q.question_id = example.question_id;
  for (const std::string& tok : example.question) q.question_ids.push_back(vocab.id(tok));
  for (const Candidate& c : example.candidates) {
    EncodedCandidate ec;
    ec.answer_id = c.answer_id;
    ec.label = c.label;
    ec.answer_length = c.answer.size();
    ec.answer = encode_extended(c.answer, vocab);
    if (c.summary) {
      std::vector<std::size_t> inputs{Vocabulary::kStart};
      std::vector<std::size_t> targets;
      for (const std::string& tok : *c.summary) {
        const std::size_t id = vocab.id(tok);
        inputs.push_back(id);
        std::size_t target = id;
        if (!vocab.contains(tok)) {
          auto it = std::find(ec.answer.oovs.begin(), ec.answer.oovs.end(), tok);
          if (it != ec.answer.oovs.end()) {
            target = vocab.size() + static_cast<std::size_t>(it - ec.answer.oovs.begin());
          }
        }
        targets.push_back(target);
      }
      targets.push_back(Vocabulary::kStop);
      ec.summary_inputs = std::move(inputs);
      ec.summary_targets = std::move(targets);
    }
    q.candidates.push_back(std::move(ec));
  }
  return q;
}

std::vector<EncodedQuestion> encode_dataset(std::span<const QAExample> examples,
                                            const Vocabulary& vocab) {
  std::vector<EncodedQuestion> out;
  out.reserve(examples.size());
  for (const QAExample& ex : examples) out.push_back(encode_example(ex, vocab));
  return out;
}

}  // namespace asas
