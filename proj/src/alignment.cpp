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

#include "asas/alignment.hpp"

namespace asas {

AttentiveReps coattention(Tape& tape, const Model& model, Var h_q, Var h_s,
                          MaskView q_mask, MaskView s_mask) {
  if (h_s.value().rank() != 2 || h_s.value().rows() == 0) {
    throw NumericError("coattention: no decoded summary steps");
  }
  const auto& p = model.alignment;
  const Var projected = ag::add_rows(ag::matmul(h_q, model.bind(tape, p.q_proj_w), true),
                                     model.bind(tape, p.q_proj_b));
  AttentiveReps out;
  out.scores = ag::tanh(
      ag::matmul(ag::matmul(projected, model.bind(tape, p.bilinear)), h_s, true));
  out.alpha_q = ag::softmax(ag::max_over_cols(out.scores, s_mask), q_mask);
  out.alpha_a = ag::softmax(ag::max_over_rows(out.scores, q_mask), s_mask);
  out.r_q = ag::weighted_rows(projected, out.alpha_q);
  out.r_a = ag::weighted_rows(h_s, out.alpha_a);
  return out;
}

Var classify(Tape& tape, const Model& model, Var r_q, Var r_a) {
  const Var parts[] = {r_q, r_a};
  return ag::softmax(ag::add(
      ag::matvec(model.bind(tape, model.alignment.cls_w), ag::concat(parts)),
      model.bind(tape, model.alignment.cls_b)));
}

}  // namespace asas
