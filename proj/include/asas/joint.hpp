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

// The joint forward pass over one question/candidate pair: shared encoder,
// summary decoder, co-attention alignment and relevance classifier.

#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "asas/alignment.hpp"
#include "asas/corpus.hpp"
#include "asas/decoder.hpp"
#include "asas/encoder.hpp"
#include "asas/losses.hpp"

namespace asas {

struct ForwardOptions {
  double dropout = 0.0;
  std::uint64_t dropout_seed = 0;
  std::size_t max_summary_len = 100;
  // Teacher-force every candidate that carries a reference summary; when
  // false (or without a reference) summary states come from greedy decoding.
  // The summary losses are computed for relevant candidates only.
  bool teacher_force = true;
  DecoderOptions decoder;
};

struct PairForward {
  Var probs;  // (p_neg, p_pos)
  Var qa_loss;
  // Present for relevant candidates whose summary states were teacher-forced.
  std::optional<Var> sum_loss;
  std::optional<Var> cov_loss;
  DecodeTrace trace;
  AttentiveReps reps;
  EncodedSequence question;
  EncodedSequence answer;

  double p_pos() const { return probs.value()[1]; }
  bool has_summary_loss() const { return sum_loss.has_value(); }
};

PairForward forward_pair(Tape& tape, const Model& model,
                         std::span<const std::size_t> question_ids,
                         const EncodedCandidate& candidate,
                         const ForwardOptions& options = {});

// Relevance score p_pos at inference: no dropout, greedy summary states.
double score_candidate(const Model& model, std::span<const std::size_t> question_ids,
                       const EncodedCandidate& candidate,
                       std::size_t max_summary_len = 100);

// Weighted per-pair objective used by the trainer:
//   w.qa * L_qa / n_pairs + w.sum * L_sum / n_summaries + w.cov * L_cov / n_summaries
Var pair_objective(const PairForward& f, const LossWeights& w, std::size_t n_pairs,
                   std::size_t n_summaries);

}  // namespace asas
