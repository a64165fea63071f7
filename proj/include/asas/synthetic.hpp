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

// Templated toy QA corpora with reference summaries, for smoke runs and
// end-to-end checks. Each question asks how to do <verb> to <noun>; the
// relevant answer describes exactly that pair and its summary copies the
// key words. Held-out questions are fresh instances (new fillers, negatives
// and candidate order) of training (verb, noun) pairs, or with
// `unseen_pairs` pairs that never occur in training.

#pragma once

#include <cstdint>
#include <vector>

#include "asas/corpus.hpp"

namespace asas {

enum class SyntheticDomain { kA, kB };

struct SyntheticOptions {
  SyntheticDomain domain = SyntheticDomain::kA;
  std::size_t train_questions = 50;
  std::size_t dev_questions = 20;
  std::size_t test_questions = 20;
  std::size_t candidates = 4;  // one relevant, the rest not
  // Negatives share the verb or the noun with the question.
  bool hard_negatives = false;
  std::size_t max_filler = 6;  // random filler words appended to answers
  // Irrelevant candidates also carry the summary of their own answer.
  bool summarize_negatives = true;
  // Dev and test questions use (verb, noun) pairs absent from training.
  bool unseen_pairs = false;
  std::uint64_t seed = 1;
};

struct SyntheticSplits {
  std::vector<QAExample> train, dev, test;
};

// Throws std::invalid_argument when the domain has too few (verb, noun)
// pairs for the requested splits.
SyntheticSplits make_synthetic(const SyntheticOptions& options);

}  // namespace asas
