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

#include "asas/model.hpp"

#include "asas/rng.hpp"

namespace asas {

void to_json(nlohmann::json& j, const ModelDims& d) {
  j = nlohmann::json{{"vocab_size", d.vocab_size},
                     {"embedding_dim", d.embedding_dim},
                     {"hidden_dim", d.hidden_dim},
                     {"attention_dim", d.attention_dim},
                     {"init_scale", d.init_scale}};
}

void from_json(const nlohmann::json& j, ModelDims& d) {
  d.vocab_size = j.value("vocab_size", d.vocab_size);
  d.embedding_dim = j.value("embedding_dim", d.embedding_dim);
  d.hidden_dim = j.value("hidden_dim", d.hidden_dim);
  d.attention_dim = j.value("attention_dim", d.attention_dim);
  d.init_scale = j.value("init_scale", d.init_scale);
}

Model::Model(const ModelDims& dims_in, std::uint64_t seed) : dims(dims_in) {
  auto rng = substream(seed, "init");
  const double s = dims.init_scale;
  const std::size_t v = dims.vocab_size, e = dims.embedding_dim,
                    h = dims.hidden_dim, a = dims.attention_dim,
                    d2 = dims.encoded_dim();
  auto add = [&](const std::string& name, ParamGroup g, Shape shape) {
    return store.add(name, g, uniform_tensor(std::move(shape), s, rng));
  };

  embedding = add("embedding", ParamGroup::kEmbeddings, {v, e});

  const auto enc = ParamGroup::kEncoder;
  encoder.gate_input_w = add("encoder.gate_input.weight", enc, {e, e});
  encoder.gate_input_b = add("encoder.gate_input.bias", enc, {e});
  encoder.gate_update_w = add("encoder.gate_update.weight", enc, {e, e});
  encoder.gate_update_b = add("encoder.gate_update.bias", enc, {e});
  encoder.forward = add_lstm(store, "encoder.forward", enc, e, h, s, rng);
  encoder.backward = add_lstm(store, "encoder.backward", enc, e, h, s, rng);

  const auto dec = ParamGroup::kDecoder;
  decoder.cell = add_lstm(store, "decoder.cell", dec, e, h, s, rng);
  decoder.bridge_w = add("decoder.bridge.weight", dec, {h, d2});
  decoder.bridge_b = add("decoder.bridge.bias", dec, {h});
  decoder.att_source = add("decoder.attention.source", dec, {a, d2});
  decoder.att_state = add("decoder.attention.state", dec, {a, h});
  decoder.att_question = add("decoder.attention.question", dec, {a, d2});
  decoder.att_bias = add("decoder.attention.bias", dec, {a});
  decoder.att_v = add("decoder.attention.v", dec, {a});
  decoder.proj_w = add("decoder.summary.weight", dec, {h, h + d2});
  decoder.proj_b = add("decoder.summary.bias", dec, {h});

  const auto ptr = ParamGroup::kPointer;
  pointer.w_summary = add("pointer.summary", ptr, {h});
  pointer.w_input = add("pointer.input", ptr, {e});
  pointer.w_question = add("pointer.question", ptr, {d2});
  pointer.bias = add("pointer.bias", ptr, {1});
  pointer.coverage = add("pointer.coverage", ptr, {a});

  output.w = add("output.weight", ParamGroup::kOutput, {v, h});
  output.b = add("output.bias", ParamGroup::kOutput, {v});

  const auto al = ParamGroup::kAlignment;
  alignment.q_proj_w = add("alignment.question_proj.weight", al, {h, d2});
  alignment.q_proj_b = add("alignment.question_proj.bias", al, {h});
  alignment.bilinear = add("alignment.bilinear", al, {h, h});
  alignment.cls_w = add("alignment.classifier.weight", al, {2, 2 * h});
  alignment.cls_b = add("alignment.classifier.bias", al, {2});
}

void Model::set_embeddings(const Tensor& table) {
  Tensor& current = store[embedding].value;
  if (table.shape() != current.shape()) {
    throw NumericError("embedding table shape " + shape_string(table.shape()) +
                       " does not match model " + shape_string(current.shape()));
  }
  current = table;
}

}  // namespace asas
