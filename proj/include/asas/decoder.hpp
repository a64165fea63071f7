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

// Question-aware attention decoder with coverage and a question-driven
// pointer-generator output layer.
//
// One decoder step, given the previous token embedding x_t:
//   s_t         = LSTM(s_{t-1}, x_t)
//   e_i         = v^T tanh(W_h h_i + W_s s_t + W_q o_q + w_c c_i + b)
//   alpha       = masked softmax(e)
//   context     = sum_i alpha_i h_i
//   h^s_t       = W_1 [s_t ; context] + b_1
//   P_vocab     = softmax(W_2 h^s_t + b_2)
//   p_gen       = sigmoid(w_h . h^s_t + w_x . x_t + w_q . o_q + b_p)
//   P(w)        = p_gen P_vocab(w) + (1 - p_gen) sum_{i: src_i = w} alpha_i
//   c           += alpha

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "asas/corpus.hpp"
#include "asas/encoder.hpp"
#include "asas/model.hpp"

namespace asas {

struct DecoderOptions {
  // Replaces the learned p_gen with a constant (0 = copy only).
  std::optional<double> pinned_p_gen;
  // Greedy and beam search never emit UNK, PAD or START.
  bool suppress_unk = true;
};

// Per-answer values reused at every step.
struct DecoderContext {
  Var source;             // H_a
  Mask mask;
  Var source_features;    // H_a W_h^T
  Var question;           // o_q
  Var question_features;  // W_q o_q + b
  std::vector<std::size_t> source_ids;  // extended id of each source position
  std::size_t vocab_size = 0;
  std::size_t extended_size = 0;
  DecoderOptions options;
};

DecoderContext make_decoder_context(Tape& tape, const Model& model,
                                    const EncodedSequence& answer, Var question,
                                    const ExtendedEncoding& source,
                                    DecoderOptions options = {});

struct DecodeState {
  std::size_t step = 0;
  LstmState lstm;
  Var coverage;  // sum of all previous attention vectors
};

// s_0 = W_r [last forward ; first backward] + b_r, zero cell, zero coverage.
DecodeState initial_decode_state(Tape& tape, const Model& model,
                                 const EncodedSequence& answer);

struct Attention {
  Var weights;
  Var context;
};

Attention attention_step(Tape& tape, const Model& model, const DecoderContext& ctx,
                         Var state, Var coverage);
Var summary_state(Tape& tape, const Model& model, Var state, Var context);
Var vocab_distribution(Tape& tape, const Model& model, Var summary);
Var generation_probability(Tape& tape, const Model& model, Var summary,
                           Var input_embedding, Var question);
Var final_distribution(Var p_vocab, Var alpha, Var p_gen,
                       std::span<const std::size_t> source_ids,
                       std::size_t extended_size);

struct StepResult {
  DecodeState next;
  Var coverage;  // c^t, the coverage this step attended with
  Var attention;
  Var context;
  Var summary;  // h^s_t
  Var p_vocab;
  Var p_gen;
  Var distribution;  // over the extended vocabulary
};

// `input_id` is the previous token; extended ids are fed as UNK.
StepResult decoder_step(Tape& tape, const Model& model, const DecoderContext& ctx,
                        const DecodeState& state, std::size_t input_id);

struct DecodeTrace {
  std::vector<StepResult> steps;
  Var summary_matrix;  // H_s, one row per step
  // Emitted extended ids (greedy only); ends with STOP when the decoder stopped.
  std::vector<std::size_t> tokens;
};

// `inputs` is START followed by the reference tokens; one step per input.
DecodeTrace decode_teacher_forced(Tape& tape, const Model& model,
                                  const DecoderContext& ctx,
                                  const DecodeState& init,
                                  std::span<const std::size_t> inputs);

// Argmax decoding until STOP or `max_len` steps.
DecodeTrace decode_greedy(Tape& tape, const Model& model, const DecoderContext& ctx,
                          const DecodeState& init, std::size_t max_len);

// Highest-probability emittable id of a distribution (lowest id on ties).
std::size_t argmax_token(std::span<const double> distribution,
                         const DecoderOptions& options);

struct SummaryOutput {
  Tokens tokens;                   // STOP excluded
  std::vector<std::size_t> ids;    // extended ids, STOP excluded
  std::vector<double> p_gen;       // p_gen at each emitted token
  double log_prob = 0.0;           // includes the STOP step when stopped
  double score = 0.0;              // log_prob / number of steps
  bool stopped = false;
};

// Length-normalized beam search (see decoder.cpp for the expansion rule).
SummaryOutput beam_search_decode(const Model& model,
                                 std::span<const std::size_t> question_ids,
                                 const ExtendedEncoding& answer,
                                 const Vocabulary& vocab, std::size_t beam_size = 4,
                                 std::size_t max_len = 100,
                                 DecoderOptions options = {});

// log(max(p, 1e-12)), the clamp shared by decoding and the NLL loss.
double clamped_log(double p);

}  // namespace asas
