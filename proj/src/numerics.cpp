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

#include "asas/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace asas {

std::vector<double> softmax(std::span<const double> v) {
  if (v.empty()) throw NumericError("softmax: empty input");
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericError("softmax: non-finite input");
  }
  const double peak = *std::max_element(v.begin(), v.end());
  std::vector<double> out(v.size());
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - peak);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

LstmParams add_lstm(ParamStore& store, const std::string& prefix,
                    ParamGroup group, std::size_t input_dim,
                    std::size_t hidden_dim, double init_scale,
                    std::mt19937_64& rng) {
  LstmParams p;
  p.weight = store.add(prefix + ".weight", group,
                       uniform_tensor({4 * hidden_dim, input_dim + hidden_dim},
                                      init_scale, rng));
  p.bias = store.add(prefix + ".bias", group,
                     uniform_tensor({4 * hidden_dim}, init_scale, rng));
  return p;
}

LstmState lstm_step(Tape& tape, const ParamStore& store, const LstmParams& p,
                    Var x, const LstmState& prev) {
  const Tensor& w = store[p.weight].value;
  const std::size_t hidden = w.rows() / 4;
  if (prev.h.size() != hidden || prev.c.size() != hidden) {
    throw NumericError("lstm_step: state size " + std::to_string(prev.h.size()) +
                       " does not match hidden size " + std::to_string(hidden));
  }
  if (x.size() + hidden != w.cols()) {
    throw NumericError("lstm_step: input size " + std::to_string(x.size()) +
                       " does not match weight " + shape_string(w.shape()));
  }
  const Var in[] = {x, prev.h};
  const Var gates = ag::add(ag::matvec(store.bind(tape, p.weight), ag::concat(in)),
                            store.bind(tape, p.bias));
  const Var i = ag::sigmoid(ag::slice(gates, 0, hidden));
  const Var f = ag::sigmoid(ag::slice(gates, hidden, hidden));
  const Var o = ag::sigmoid(ag::slice(gates, 2 * hidden, hidden));
  const Var g = ag::tanh(ag::slice(gates, 3 * hidden, hidden));
  const Var c = ag::add(ag::mul(f, prev.c), ag::mul(i, g));
  const Var h = ag::mul(o, ag::tanh(c));
  return {h, c};
}

Adagrad::Adagrad(const ParamStore& store, AdagradConfig config)
    : config_(config) {
  acc_.reserve(store.size());
  for (const Parameter& p : store.all()) {
    acc_.emplace_back(p.value.shape(), config_.initial_accumulator);
  }
}

void Adagrad::step(ParamStore& store, const Gradients& grads,
                   std::span<const bool> trainable) {
  if (grads.size() != store.size() || acc_.size() != store.size()) {
    throw NumericError("adagrad: gradient/parameter count mismatch");
  }
  if (!trainable.empty() && trainable.size() != store.size()) {
    throw NumericError("adagrad: trainable mask size mismatch");
  }
  for (ParamId id = 0; id < store.size(); ++id) {
    if (!trainable.empty() && !trainable[id]) continue;
    if (!grads.has(id)) continue;
    const Tensor& g = grads.get(id);
    Tensor& theta = store[id].value;
    Tensor& acc = acc_[id];
    if (g.shape() != theta.shape() || acc.shape() != theta.shape()) {
      throw NumericError("adagrad: shape mismatch for " + store[id].name);
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
      acc[k] += g[k] * g[k];
      theta[k] -= config_.learning_rate * g[k] /
                  (std::sqrt(acc[k]) + config_.epsilon);
    }
  }
}

double clip_global_norm(Gradients& grads, double max_norm,
                        std::span<const bool> trainable) {
  double sq = 0.0;
  for (ParamId id = 0; id < grads.size(); ++id) {
    if (!trainable.empty() && !trainable[id]) continue;
    if (!grads.has(id)) continue;
    for (double v : grads.get(id).values()) sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double factor = max_norm / norm;
    for (ParamId id = 0; id < grads.size(); ++id) {
      if (!trainable.empty() && !trainable[id]) continue;
      if (!grads.has(id)) continue;
      for (double& v : grads.get(id).values()) v *= factor;
    }
  }
  return norm;
}

}  // namespace asas
