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

#include "asas/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace asas {

double clamped_log(double p) { return std::log(std::max(p, 1e-12)); }

DecoderContext make_decoder_context(Tape& tape, const Model& model,
                                    const EncodedSequence& answer, Var question,
                                    const ExtendedEncoding& source,
                                    DecoderOptions options) {
  if (source.extended_ids.size() != answer.length) {
    throw NumericError("decoder context: source ids do not match encoded length");
  }
  const auto& p = model.decoder;
  DecoderContext ctx;
  ctx.source = answer.h;
  ctx.mask = answer.mask;
  ctx.source_features = ag::matmul(answer.h, model.bind(tape, p.att_source), true);
  ctx.question = question;
  ctx.question_features = ag::add(ag::matvec(model.bind(tape, p.att_question), question),
                                  model.bind(tape, p.att_bias));
  ctx.source_ids = source.extended_ids;
  // Padding rows copy onto PAD with zero attention.
  ctx.source_ids.resize(answer.mask.size(), Vocabulary::kPad);
  ctx.vocab_size = model.dims.vocab_size;
  ctx.extended_size = model.dims.vocab_size + source.oovs.size();
  ctx.options = options;
  return ctx;
}

DecodeState initial_decode_state(Tape& tape, const Model& model,
                                 const EncodedSequence& answer) {
  const auto& p = model.decoder;
  const Var finals[] = {answer.last_forward, answer.first_backward};
  DecodeState state;
  state.lstm.h = ag::add(ag::matvec(model.bind(tape, p.bridge_w), ag::concat(finals)),
                         model.bind(tape, p.bridge_b));
  state.lstm.c = tape.constant(Tensor({model.dims.hidden_dim}));
  state.coverage = tape.constant(Tensor({answer.mask.size()}));
  return state;
}

Attention attention_step(Tape& tape, const Model& model, const DecoderContext& ctx,
                         Var state, Var coverage) {
  const auto& p = model.decoder;
  const Var shift = ag::add(ag::matvec(model.bind(tape, p.att_state), state),
                            ctx.question_features);
  const Var features =
      ag::add(ag::add_rows(ctx.source_features, shift),
              ag::outer(coverage, model.bind(tape, model.pointer.coverage)));
  const Var logits = ag::matvec(ag::tanh(features), model.bind(tape, p.att_v));
  const Var weights = ag::softmax(logits, ctx.mask);
  return {weights, ag::weighted_rows(ctx.source, weights)};
}

Var summary_state(Tape& tape, const Model& model, Var state, Var context) {
  const Var parts[] = {state, context};
  return ag::add(ag::matvec(model.bind(tape, model.decoder.proj_w), ag::concat(parts)),
                 model.bind(tape, model.decoder.proj_b));
}

Var vocab_distribution(Tape& tape, const Model& model, Var summary) {
  return ag::softmax(ag::add(ag::matvec(model.bind(tape, model.output.w), summary),
                             model.bind(tape, model.output.b)));
}

Var generation_probability(Tape& tape, const Model& model, Var summary,
                           Var input_embedding, Var question) {
  const auto& p = model.pointer;
  const Var terms[] = {ag::dot(model.bind(tape, p.w_summary), summary),
                       ag::dot(model.bind(tape, p.w_input), input_embedding),
                       ag::dot(model.bind(tape, p.w_question), question),
                       model.bind(tape, p.bias)};
  return ag::sigmoid(ag::add_n(terms));
}

Var final_distribution(Var p_vocab, Var alpha, Var p_gen,
                       std::span<const std::size_t> source_ids,
                       std::size_t extended_size) {
  return ag::pointer_mixture(p_vocab, alpha, p_gen, source_ids, extended_size);
}

StepResult decoder_step(Tape& tape, const Model& model, const DecoderContext& ctx,
                        const DecodeState& state, std::size_t input_id) {
  const std::size_t in_vocab = input_id < ctx.vocab_size ? input_id : Vocabulary::kUnk;
  const Var x = ag::row(model.bind(tape, model.embedding), in_vocab);

  StepResult r;
  r.coverage = state.coverage;
  r.next.lstm = lstm_step(tape, model.store, model.decoder.cell, x, state.lstm);
  const Attention att = attention_step(tape, model, ctx, r.next.lstm.h, state.coverage);
  r.attention = att.weights;
  r.context = att.context;
  r.summary = summary_state(tape, model, r.next.lstm.h, att.context);
  r.p_vocab = vocab_distribution(tape, model, r.summary);
  r.p_gen = ctx.options.pinned_p_gen
                ? tape.constant(Tensor::scalar(*ctx.options.pinned_p_gen))
                : generation_probability(tape, model, r.summary, x, ctx.question);
  r.distribution = final_distribution(r.p_vocab, r.attention, r.p_gen, ctx.source_ids,
                                      ctx.extended_size);
  r.next.coverage = ag::add(state.coverage, r.attention);
  r.next.step = state.step + 1;
  return r;
}

namespace {

Var stack_summaries(const std::vector<StepResult>& steps) {
  std::vector<Var> rows;
  rows.reserve(steps.size());
  for (const StepResult& s : steps) rows.push_back(s.summary);
  return ag::stack_rows(rows);
}

bool emittable(std::size_t id, const DecoderOptions& options) {
  if (!options.suppress_unk) return true;
  return id != Vocabulary::kUnk && id != Vocabulary::kPad && id != Vocabulary::kStart;
}

}  // namespace

DecodeTrace decode_teacher_forced(Tape& tape, const Model& model,
                                  const DecoderContext& ctx,
                                  const DecodeState& init,
                                  std::span<const std::size_t> inputs) {
  if (inputs.empty()) throw std::invalid_argument("teacher forcing needs a reference");
  DecodeTrace trace;
  DecodeState state = init;
  for (std::size_t input : inputs) {
    trace.steps.push_back(decoder_step(tape, model, ctx, state, input));
    state = trace.steps.back().next;
  }
  trace.summary_matrix = stack_summaries(trace.steps);
  return trace;
}

std::size_t argmax_token(std::span<const double> distribution,
                         const DecoderOptions& options) {
  std::size_t best = distribution.size();
  for (std::size_t w = 0; w < distribution.size(); ++w) {
    if (!emittable(w, options)) continue;
    if (best == distribution.size() || distribution[w] > distribution[best]) best = w;
  }
  if (best == distribution.size()) throw NumericError("no emittable token");
  return best;
}

DecodeTrace decode_greedy(Tape& tape, const Model& model, const DecoderContext& ctx,
                          const DecodeState& init, std::size_t max_len) {
  if (max_len == 0) throw std::invalid_argument("greedy decoding needs max_len >= 1");
  DecodeTrace trace;
  DecodeState state = init;
  std::size_t input = Vocabulary::kStart;
  for (std::size_t t = 0; t < max_len; ++t) {
    trace.steps.push_back(decoder_step(tape, model, ctx, state, input));
    state = trace.steps.back().next;
    input = argmax_token(trace.steps.back().distribution.value().data(), ctx.options);
    trace.tokens.push_back(input);
    if (input == Vocabulary::kStop) break;
  }
  trace.summary_matrix = stack_summaries(trace.steps);
  return trace;
}

// Beam search keeps `beam_size` live hypotheses. Each step expands every live
// hypothesis by its 2 * beam_size most probable emittable tokens, sorts all
// expansions by cumulative log-probability and refills the beam in that
// order; expansions ending in STOP move to the finished list. The search ends
// when `beam_size` hypotheses have finished or after `max_len` steps, and the
// finished (else live) hypothesis with the best length-normalized score wins.
SummaryOutput beam_search_decode(const Model& model,
                                 std::span<const std::size_t> question_ids,
                                 const ExtendedEncoding& answer,
                                 const Vocabulary& vocab, std::size_t beam_size,
                                 std::size_t max_len, DecoderOptions options) {
  if (beam_size < 1) throw std::invalid_argument("beam_size must be at least 1");
  if (max_len < 1) throw std::invalid_argument("max_len must be at least 1");
  Tape tape;
  Dropout no_dropout;
  const EncodedSequence q = encode_tokens(tape, model, question_ids, no_dropout);
  const EncodedSequence a = encode_tokens(tape, model, answer.ids, no_dropout);
  const DecoderContext ctx =
      make_decoder_context(tape, model, a, question_vector(q), answer, options);

  struct Hypothesis {
    std::vector<std::size_t> ids;
    std::vector<double> p_gen;
    double log_prob = 0.0;
    DecodeState state;
    bool stopped = false;
  };
  auto steps_of = [](const Hypothesis& h) {
    return static_cast<double>(h.ids.size() + (h.stopped ? 1 : 0));
  };

  std::vector<Hypothesis> live{{{}, {}, 0.0, initial_decode_state(tape, model, a), false}};
  std::vector<Hypothesis> finished;
  const std::size_t expand = 2 * beam_size;

  for (std::size_t t = 0; t < max_len && finished.size() < beam_size && !live.empty(); ++t) {
    struct Expansion {
      std::size_t parent;
      std::size_t token;
      double log_prob;
      double p_gen;
    };
    std::vector<Expansion> expansions;
    std::vector<StepResult> results;
    for (std::size_t h = 0; h < live.size(); ++h) {
      const std::size_t input = live[h].ids.empty() ? Vocabulary::kStart : live[h].ids.back();
      results.push_back(decoder_step(tape, model, ctx, live[h].state, input));
      const auto dist = results.back().distribution.value().data();
      std::vector<std::size_t> order;
      for (std::size_t w = 0; w < dist.size(); ++w) {
        if (emittable(w, options)) order.push_back(w);
      }
      const std::size_t keep = std::min(expand, order.size());
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                        order.end(), [&](std::size_t x, std::size_t y) {
                          return dist[x] > dist[y] || (dist[x] == dist[y] && x < y);
                        });
      for (std::size_t k = 0; k < keep; ++k) {
        expansions.push_back({h, order[k], live[h].log_prob + clamped_log(dist[order[k]]),
                              results.back().p_gen.item()});
      }
    }
    std::stable_sort(expansions.begin(), expansions.end(),
                     [](const Expansion& x, const Expansion& y) { return x.log_prob > y.log_prob; });

    std::vector<Hypothesis> next;
    for (const Expansion& e : expansions) {
      Hypothesis h = live[e.parent];
      h.log_prob = e.log_prob;
      h.state = results[e.parent].next;
      if (e.token == Vocabulary::kStop) {
        h.stopped = true;
        finished.push_back(std::move(h));
      } else {
        h.ids.push_back(e.token);
        h.p_gen.push_back(e.p_gen);
        next.push_back(std::move(h));
      }
      if (next.size() == beam_size || finished.size() == beam_size) break;
    }
    live = std::move(next);
  }

  std::vector<Hypothesis>& pool = finished.empty() ? live : finished;
  const Hypothesis* best = nullptr;
  for (const Hypothesis& h : pool) {
    if (!best || h.log_prob / steps_of(h) > best->log_prob / steps_of(*best)) best = &h;
  }
  SummaryOutput out;
  out.ids = best->ids;
  out.p_gen = best->p_gen;
  out.log_prob = best->log_prob;
  out.stopped = best->stopped;
  out.score = best->log_prob / steps_of(*best);
  out.tokens = decode_extended(out.ids, vocab, answer.oovs);
  return out;
}

}  // namespace asas
