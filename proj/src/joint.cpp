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

#include "asas/joint.hpp"

#include "asas/rng.hpp"

namespace asas {

PairForward forward_pair(Tape& tape, const Model& model,
                         std::span<const std::size_t> question_ids,
                         const EncodedCandidate& candidate,
                         const ForwardOptions& options) {
  auto rng = substream(options.dropout_seed, "dropout");
  Dropout drop{options.dropout, options.dropout > 0.0 ? &rng : nullptr};

  PairForward f;
  f.question = encode_tokens(tape, model, question_ids, drop);
  f.answer = encode_tokens(tape, model, candidate.answer.ids, drop);
  const Var o_q = question_vector(f.question);
  const DecoderContext ctx =
      make_decoder_context(tape, model, f.answer, o_q, candidate.answer, options.decoder);
  const DecodeState init = initial_decode_state(tape, model, f.answer);

  if (options.teacher_force && candidate.summary_inputs) {
    f.trace = decode_teacher_forced(tape, model, ctx, init, *candidate.summary_inputs);
    if (candidate.label == 1) {
      std::vector<Var> dists, attns, covs;
      for (const StepResult& s : f.trace.steps) {
        dists.push_back(s.distribution);
        attns.push_back(s.attention);
        covs.push_back(s.coverage);
      }
      f.sum_loss = sum_loss(dists, *candidate.summary_targets);
      f.cov_loss = cov_loss(attns, covs);
    }
  } else {
    f.trace = decode_greedy(tape, model, ctx, init, options.max_summary_len);
  }

  f.reps = coattention(tape, model, f.question.h, f.trace.summary_matrix, f.question.mask);
  f.probs = classify(tape, model, f.reps.r_q, f.reps.r_a);
  f.qa_loss = qa_loss(f.probs, candidate.label);
  return f;
}

double score_candidate(const Model& model, std::span<const std::size_t> question_ids,
                       const EncodedCandidate& candidate, std::size_t max_summary_len) {
  Tape tape;
  ForwardOptions options;
  options.max_summary_len = max_summary_len;
  options.teacher_force = false;
  return forward_pair(tape, model, question_ids, candidate, options).p_pos();
}

Var pair_objective(const PairForward& f, const LossWeights& w, std::size_t n_pairs,
                   std::size_t n_summaries) {
  std::vector<Var> terms{ag::affine(f.qa_loss, w.qa / static_cast<double>(n_pairs))};
  if (f.sum_loss && n_summaries > 0) {
    const double inv = 1.0 / static_cast<double>(n_summaries);
    terms.push_back(ag::affine(*f.sum_loss, w.sum * inv));
    terms.push_back(ag::affine(*f.cov_loss, w.cov * inv));
  }
  return ag::add_n(terms);
}

}  // namespace asas
