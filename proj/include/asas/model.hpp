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

#pragma once

#include <cstdint>

#include "json.hpp"

#include "asas/numerics.hpp"
#include "asas/params.hpp"

namespace asas {

struct ModelDims {
  std::size_t vocab_size = 50000;
  std::size_t embedding_dim = 100;
  // Per-direction encoder width, decoder width, and the summary width d_s.
  std::size_t hidden_dim = 150;
  std::size_t attention_dim = 150;
  double init_scale = 0.05;

  std::size_t encoded_dim() const { return 2 * hidden_dim; }
  bool operator==(const ModelDims&) const = default;
};

void to_json(nlohmann::json& j, const ModelDims& d);
void from_json(const nlohmann::json& j, ModelDims& d);

struct EncoderParams {
  ParamId gate_input_w, gate_input_b;    // sigmoid branch
  ParamId gate_update_w, gate_update_b;  // tanh branch
  LstmParams forward, backward;
};

struct DecoderParams {
  LstmParams cell;
  ParamId bridge_w, bridge_b;  // s_0 from final encoder states
  ParamId att_source, att_state, att_question, att_bias, att_v;
  ParamId proj_w, proj_b;  // h^s_t = W_1 [s_t ; context] + b_1
};

struct PointerParams {
  ParamId w_summary, w_input, w_question, bias;
  ParamId coverage;  // w_c in the attention logits
};

struct OutputParams {
  ParamId w, b;
};

struct AlignmentParams {
  ParamId q_proj_w, q_proj_b;  // H_q rows -> d_s
  ParamId bilinear;            // U
  ParamId cls_w, cls_b;        // 2 x 2d_s, 2
};

// All learnable weights. Copying a Model snapshots its parameters.
struct Model {
  Model() = default;
  // Uniform [-init_scale, init_scale] initialization from `seed`'s "init"
  // sub-stream.
  Model(const ModelDims& dims, std::uint64_t seed);

  ModelDims dims;
  ParamStore store;
  ParamId embedding = 0;
  EncoderParams encoder{};
  DecoderParams decoder{};
  PointerParams pointer{};
  OutputParams output{};
  AlignmentParams alignment{};

  Var bind(Tape& tape, ParamId id) const { return store.bind(tape, id); }
  // Replaces the embedding table; throws on shape mismatch.
  void set_embeddings(const Tensor& table);
};

}  // namespace asas
