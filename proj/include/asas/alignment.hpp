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

// Two-way co-attention between the encoded question and the decoded summary
// states, followed by the binary relevance classifier.

#pragma once

#include <span>

#include "asas/model.hpp"

namespace asas {

struct AttentiveReps {
  Var r_q;      // d_s
  Var r_a;      // d_s
  Var alpha_q;  // over question positions
  Var alpha_a;  // over summary steps
  Var scores;   // M = tanh(H_q' U H_s^T), L_q x L_s
};

// Projects H_q rows to d_s, then
//   M = tanh(H_q' U H_s^T)
//   alpha_q = softmax(max over summary steps of M)
//   alpha_a = softmax(max over question positions of M)
//   r_q = H_q'^T alpha_q, r_a = H_s^T alpha_a
// Masked positions get zero weight.
AttentiveReps coattention(Tape& tape, const Model& model, Var h_q, Var h_s,
                          MaskView q_mask = {},
                          MaskView s_mask = {});

// softmax(W_s [r_q ; r_a] + b_s) as (p_neg, p_pos).
Var classify(Tape& tape, const Model& model, Var r_q, Var r_a);

}  // namespace asas
