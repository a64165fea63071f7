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

// Reverse-mode automatic differentiation over dense tensors.
//
// A Tape records every operation as a node appended in execution order, so
// node indices are already a topological order of the computation DAG.
// backward() walks the nodes once in reverse. Tapes are single-threaded;
// build one per example and reduce the resulting Gradients.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "asas/tensor.hpp"

namespace asas {

using ParamId = std::size_t;

class Tape;

// Handle to a node on a tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;

  bool valid() const { return tape_ != nullptr; }
  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }

  const Tensor& value() const;
  double item() const { return value().item(); }
  const Shape& shape() const { return value().shape(); }
  std::size_t size() const { return value().size(); }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Per-parameter gradient buffers indexed by ParamId. An empty tensor stands
// for an all-zero gradient (parameter not reached by the loss).
// Sequence masks: nonzero marks a valid position. An empty view means all
// positions are valid.
using Mask = std::vector<std::uint8_t>;
using MaskView = std::span<const std::uint8_t>;

class Gradients {
 public:
  Gradients() = default;
  explicit Gradients(std::size_t n_params) : grads_(n_params) {}

  std::size_t size() const { return grads_.size(); }
  bool has(ParamId id) const { return !grads_.at(id).empty(); }
  const Tensor& get(ParamId id) const { return grads_.at(id); }
  Tensor& get(ParamId id) { return grads_.at(id); }

  void accumulate(ParamId id, const Tensor& g);
  void add(const Gradients& other);
  void scale(double factor);

 private:
  std::vector<Tensor> grads_;
};

class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  // Leaf bound to a parameter tensor owned elsewhere. Repeated calls with the
  // same id return the same node. `value` must outlive the tape.
  Var parameter(ParamId id, const Tensor& value);

  // Seeds d(loss)/d(loss) = 1 and propagates to every reachable node.
  void backward(Var loss);
  bool backward_done() const { return backward_done_; }

  // Gradients of every parameter leaf after backward().
  Gradients gradients(std::size_t n_params) const;
  // Gradient of an arbitrary node; zeros if the node was not reached.
  Tensor grad(Var v) const;

  std::size_t size() const { return nodes_.size(); }

  // Op-implementation interface.
  Var push(Tensor value, const char* op, BackwardFn backward);
  const Tensor& value_of(std::size_t id) const;
  // Gradient buffer of node `id`, allocated as zeros on first use.
  Tensor& grad_buffer(std::size_t id);
  const Tensor* grad_if_any(std::size_t id) const;

 private:
  struct Node {
    Tensor owned;
    const Tensor* external = nullptr;
    Tensor grad;
    BackwardFn backward;
    std::optional<ParamId> param;
    const Tensor& value() const { return external ? *external : owned; }
  };

  std::vector<Node> nodes_;
  std::unordered_map<ParamId, std::size_t> param_nodes_;
  bool backward_done_ = false;
};

// Differentiable operations. All inputs must live on the same tape.
namespace ag {

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
// scale * a + shift, elementwise.
Var affine(Var a, double scale, double shift = 0.0);
Var tanh(Var a);
Var sigmoid(Var a);
// log(max(a, floor)); gradient is zero where the clamp is active.
Var log(Var a, double floor = 1e-12);
Var minimum(Var a, Var b);

// W[m x n] * x[n]
Var matvec(Var w, Var x);
// A * B, or A * B^T when trans_b.
Var matmul(Var a, Var b, bool trans_b = false);
// H^T a for H[L x d], a[L].
Var weighted_rows(Var h, Var a);
// M[L x d] + broadcast v[d] onto every row.
Var add_rows(Var m, Var v);
// u[L] v[d]^T
Var outer(Var u, Var v);

Var concat(std::span<const Var> parts);
Var slice(Var v, std::size_t offset, std::size_t length);
Var stack_rows(std::span<const Var> rows);
Var row(Var m, std::size_t index);
// Rows of `m` selected by `indices` (embedding lookup).
Var gather_rows(Var m, std::span<const std::size_t> indices);

Var dot(Var a, Var b);
Var sum(Var a);
Var pick(Var v, std::size_t index);
Var add_n(std::span<const Var> scalars);

// Softmax over the entries whose mask is true; masked entries are exactly 0.
// An empty mask means all entries are valid.
Var softmax(Var v, MaskView mask = {});
// Mean of the rows whose mask is true.
Var mean_rows(Var m, MaskView row_mask = {});
// For M[R x C]: out[r] = max over valid columns; out[c] = max over valid rows.
Var max_over_cols(Var m, MaskView col_mask = {});
Var max_over_rows(Var m, MaskView row_mask = {});

// Extended-vocabulary mixture:
//   P[w] = p_gen * p_vocab[w] + (1 - p_gen) * sum_{i : source[i] == w} alpha[i]
// over ids [0, extended_size). p_vocab covers [0, |V|).
Var pointer_mixture(Var p_vocab, Var alpha, Var p_gen,
                    std::span<const std::size_t> source_ids,
                    std::size_t extended_size);

// Multiplies by a fixed inverted-dropout mask.
Var apply_mask(Var a, const Tensor& mask);

}  // namespace ag

}  // namespace asas
