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

// Shared compare-aggregate Bi-LSTM encoder. Questions and answers go through
// the same parameters.

#pragma once

#include <random>
#include <span>
#include <vector>

#include "asas/model.hpp"

namespace asas {

// Inverted dropout. Inactive when rate == 0 or rng is null.
struct Dropout {
  double rate = 0.0;
  std::mt19937_64* rng = nullptr;

  bool active() const { return rate > 0.0 && rng != nullptr; }
};

Var dropout(Var x, Dropout& d);

struct EncodedSequence {
  Var h;  // rows x 2H; rows >= length are zero padding
  std::size_t length = 0;
  Mask mask;
  Var last_forward;    // forward state at position length-1
  Var first_backward;  // backward state at position 0
};

// Embedding rows for `ids` (L x E).
Var embed(Tape& tape, const Model& model, std::span<const std::size_t> ids);

// sigmoid(W Wi^T + bi) * tanh(W Wu^T + bu), row-wise.
Var compare_gate(Tape& tape, const Model& model, Var embedded);

// Runs both directions over the first `length` rows of `gated`; any further
// rows are treated as padding.
EncodedSequence bilstm_encode(Tape& tape, const Model& model, Var gated,
                              std::size_t length);

// Mean of the unpadded rows.
Var question_vector(const EncodedSequence& seq);

// embed -> dropout -> compare gate -> Bi-LSTM -> dropout on outputs.
EncodedSequence encode_tokens(Tape& tape, const Model& model,
                              std::span<const std::size_t> ids, Dropout& drop);

}  // namespace asas
