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

#include <span>
#include <string>
#include <vector>

#include "asas/params.hpp"
#include "asas/tape.hpp"

namespace asas {

// Max-shifted softmax on plain values. Throws NumericError on empty or
// non-finite input.
std::vector<double> softmax(std::span<const double> v);
double sigmoid(double x);

// LSTM cell weights: gates = W [x ; h] + b, with W of shape 4H x (X + H) and
// gate blocks ordered input, forget, output, candidate.
struct LstmParams {
  ParamId weight = 0;
  ParamId bias = 0;
};

struct LstmState {
  Var h;
  Var c;
};

LstmParams add_lstm(ParamStore& store, const std::string& prefix,
                    ParamGroup group, std::size_t input_dim,
                    std::size_t hidden_dim, double init_scale,
                    std::mt19937_64& rng);

// One step: i, f, o = sigmoid(.), g = tanh(.); c' = f*c + i*g; h' = o*tanh(c').
LstmState lstm_step(Tape& tape, const ParamStore& store, const LstmParams& p,
                    Var x, const LstmState& prev);

struct AdagradConfig {
  double learning_rate = 0.15;
  double initial_accumulator = 0.1;
  double epsilon = 1e-8;
};

// Adagrad: acc += g^2; theta -= lr * g / (sqrt(acc) + eps).
class Adagrad {
 public:
  Adagrad() = default;
  Adagrad(const ParamStore& store, AdagradConfig config);

  const AdagradConfig& config() const { return config_; }
  const std::vector<Tensor>& accumulators() const { return acc_; }
  std::vector<Tensor>& accumulators() { return acc_; }

  // Updates parameters whose `trainable` entry is true (all when empty).
  // Empty gradient tensors count as zero.
  void step(ParamStore& store, const Gradients& grads,
            std::span<const bool> trainable = {});

 private:
  AdagradConfig config_;
  std::vector<Tensor> acc_;
};

// Rescales the trainable gradients so their joint L2 norm is at most
// `max_norm`. Returns the norm before clipping.
double clip_global_norm(Gradients& grads, double max_norm,
                        std::span<const bool> trainable = {});

}  // namespace asas
