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

#include "asas/encoder.hpp"

namespace asas {

Var dropout(Var x, Dropout& d) {
  if (!d.active()) return x;
  Tensor mask(x.shape());
  std::bernoulli_distribution keep(1.0 - d.rate);
  const double scale = 1.0 / (1.0 - d.rate);
  for (double& m : mask.values()) m = keep(*d.rng) ? scale : 0.0;
  return ag::apply_mask(x, mask);
}

Var embed(Tape& tape, const Model& model, std::span<const std::size_t> ids) {
  return ag::gather_rows(model.bind(tape, model.embedding), ids);
}

Var compare_gate(Tape& tape, const Model& model, Var embedded) {
  const auto& p = model.encoder;
  if (embedded.value().rank() != 2 ||
      embedded.value().cols() != model.dims.embedding_dim) {
    throw NumericError("compare_gate: expected L x " +
                       std::to_string(model.dims.embedding_dim) + " input, got " +
                       shape_string(embedded.shape()));
  }
  const Var gate = ag::sigmoid(ag::add_rows(
      ag::matmul(embedded, model.bind(tape, p.gate_input_w), /*trans_b=*/true),
      model.bind(tape, p.gate_input_b)));
  const Var update = ag::tanh(ag::add_rows(
      ag::matmul(embedded, model.bind(tape, p.gate_update_w), /*trans_b=*/true),
      model.bind(tape, p.gate_update_b)));
  return ag::mul(gate, update);
}

EncodedSequence bilstm_encode(Tape& tape, const Model& model, Var gated,
                              std::size_t length) {
  if (length == 0) throw NumericError("bilstm_encode: zero-length sequence");
  const std::size_t rows = gated.value().rows();
  if (length > rows) throw NumericError("bilstm_encode: length exceeds rows");
  const std::size_t hidden = model.dims.hidden_dim;
  const LstmState zero{tape.constant(Tensor({hidden})),
                       tape.constant(Tensor({hidden}))};

  std::vector<Var> forward(length), backward(length);
  LstmState state = zero;
  for (std::size_t t = 0; t < length; ++t) {
    state = lstm_step(tape, model.store, model.encoder.forward, ag::row(gated, t), state);
    forward[t] = state.h;
  }
  state = zero;
  for (std::size_t t = length; t-- > 0;) {
    state = lstm_step(tape, model.store, model.encoder.backward, ag::row(gated, t), state);
    backward[t] = state.h;
  }

  std::vector<Var> out_rows;
  out_rows.reserve(rows);
  for (std::size_t t = 0; t < length; ++t) {
    const Var pair[] = {forward[t], backward[t]};
    out_rows.push_back(ag::concat(pair));
  }
  if (rows > length) {
    const Var pad = tape.constant(Tensor({2 * hidden}));
    out_rows.insert(out_rows.end(), rows - length, pad);
  }
  EncodedSequence seq;
  seq.h = ag::stack_rows(out_rows);
  seq.length = length;
  seq.mask.assign(rows, 0);
  std::fill(seq.mask.begin(), seq.mask.begin() + static_cast<std::ptrdiff_t>(length), 1);
  seq.last_forward = forward[length - 1];
  seq.first_backward = backward[0];
  return seq;
}

Var question_vector(const EncodedSequence& seq) {
  return ag::mean_rows(seq.h, seq.mask);
}

EncodedSequence encode_tokens(Tape& tape, const Model& model,
                              std::span<const std::size_t> ids, Dropout& drop) {
  const Var embedded = dropout(embed(tape, model, ids), drop);
  EncodedSequence seq =
      bilstm_encode(tape, model, compare_gate(tape, model, embedded), ids.size());
  seq.h = dropout(seq.h, drop);
  return seq;
}

}  // namespace asas
