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

#include "asas/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "asas/kernels.hpp"

namespace asas {

namespace kp = kernels::parallel;

const Tensor& Var::value() const { return tape_->value_of(id_); }

// --- Gradients -------------------------------------------------------------

void Gradients::accumulate(ParamId id, const Tensor& g) {
  Tensor& dst = grads_.at(id);
  if (dst.empty()) {
    dst = g;
    return;
  }
  if (dst.shape() != g.shape()) {
    throw NumericError("gradient shape mismatch for parameter " +
                       std::to_string(id));
  }
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += g[i];
}

void Gradients::add(const Gradients& other) {
  if (other.size() != size()) throw NumericError("gradient set size mismatch");
  for (std::size_t id = 0; id < size(); ++id) {
    if (other.has(id)) accumulate(id, other.get(id));
  }
}

void Gradients::scale(double factor) {
  for (auto& g : grads_) {
    for (double& v : g.values()) v *= factor;
  }
}

// --- Tape ------------------------------------------------------------------

Var Tape::constant(Tensor value) {
  return push(std::move(value), "constant", nullptr);
}

Var Tape::parameter(ParamId id, const Tensor& value) {
  if (auto it = param_nodes_.find(id); it != param_nodes_.end()) {
    return Var(this, it->second);
  }
  Node node;
  node.external = &value;
  node.param = id;
  nodes_.push_back(std::move(node));
  const std::size_t index = nodes_.size() - 1;
  param_nodes_.emplace(id, index);
  return Var(this, index);
}

Var Tape::push(Tensor value, const char* op, BackwardFn backward) {
  value.check_finite(op);
  Node node;
  node.owned = std::move(value);
  node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

const Tensor& Tape::value_of(std::size_t id) const {
  return nodes_.at(id).value();
}

Tensor& Tape::grad_buffer(std::size_t id) {
  Node& node = nodes_.at(id);
  if (node.grad.empty()) node.grad = Tensor(node.value().shape(), 0.0);
  return node.grad;
}

const Tensor* Tape::grad_if_any(std::size_t id) const {
  const Node& node = nodes_.at(id);
  return node.grad.empty() ? nullptr : &node.grad;
}

void Tape::backward(Var loss) {
  if (loss.tape_ != this) throw NumericError("backward: loss is on another tape");
  if (backward_done_) throw NumericError("backward called twice on one tape");
  if (loss.value().size() != 1) {
    throw NumericError("backward requires a scalar loss, got shape " +
                       shape_string(loss.shape()));
  }
  backward_done_ = true;
  grad_buffer(loss.id_)[0] = 1.0;
  for (std::size_t i = loss.id_ + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (node.grad.empty() || !node.backward) continue;
    node.backward(*this, i);
  }
}

Gradients Tape::gradients(std::size_t n_params) const {
  Gradients out(n_params);
  for (const auto& [param, index] : param_nodes_) {
    const Node& node = nodes_[index];
    if (!node.grad.empty()) out.accumulate(param, node.grad);
  }
  return out;
}

Tensor Tape::grad(Var v) const {
  const Tensor* g = grad_if_any(v.id());
  return g ? *g : Tensor(v.value().shape(), 0.0);
}

// --- ops -------------------------------------------------------------------

namespace ag {
namespace {

Tape& same_tape(Var a, Var b, const char* op) {
  if (!a.valid() || !b.valid() || &a.tape() != &b.tape()) {
    throw NumericError(std::string(op) + ": operands on different tapes");
  }
  return a.tape();
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw NumericError(std::string(op) + ": shape mismatch " +
                       shape_string(a.shape()) + " vs " +
                       shape_string(b.shape()));
  }
}

void require_rank(const Tensor& t, std::size_t rank, const char* op) {
  if (t.rank() != rank) {
    throw NumericError(std::string(op) + ": expected rank " +
                       std::to_string(rank) + ", got " +
                       shape_string(t.shape()));
  }
}

void check_mask(MaskView mask, std::size_t n, const char* op) {
  if (!mask.empty() && mask.size() != n) {
    throw NumericError(std::string(op) + ": mask length mismatch");
  }
}

bool valid_at(MaskView mask, std::size_t i) {
  return mask.empty() || mask[i];
}

// Elementwise unary op: y = f(x), dx += g * df(x, y).
template <typename F, typename DF>
Var unary(Var a, const char* op, F f, DF df) {
  const Tensor& x = a.value();
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  const std::size_t ia = a.id();
  return a.tape().push(std::move(y), op, [ia, df](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    const Tensor& xv = t.value_of(ia);
    const Tensor& yv = t.value_of(self);
    Tensor& ga = t.grad_buffer(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * df(xv[i], yv[i]);
  });
}

}  // namespace

Var add(Var a, Var b) {
  Tape& tape = same_tape(a, b, "add");
  require_same_shape(a.value(), b.value(), "add");
  Tensor y = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return tape.push(std::move(y), "add", [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    for (std::size_t id : {ia, ib}) {
      Tensor& gx = t.grad_buffer(id);
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
  });
}

Var sub(Var a, Var b) {
  Tape& tape = same_tape(a, b, "sub");
  require_same_shape(a.value(), b.value(), "sub");
  Tensor y = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return tape.push(std::move(y), "sub", [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    Tensor& ga = t.grad_buffer(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    Tensor& gb = t.grad_buffer(ib);
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
  });
}

Var mul(Var a, Var b) {
  Tape& tape = same_tape(a, b, "mul");
  require_same_shape(a.value(), b.value(), "mul");
  Tensor y = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return tape.push(std::move(y), "mul", [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    const Tensor& av = t.value_of(ia);
    const Tensor& bv = t.value_of(ib);
    {
      Tensor& ga = t.grad_buffer(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    }
    Tensor& gb = t.grad_buffer(ib);
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
  });
}

Var affine(Var a, double scale, double shift) {
  return unary(
      a, "affine", [scale, shift](double x) { return scale * x + shift; },
      [scale](double, double) { return scale; });
}

Var tanh(Var a) {
  return unary(
      a, "tanh", [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Var sigmoid(Var a) {
  return unary(
      a, "sigmoid",
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var log(Var a, double floor) {
  return unary(
      a, "log", [floor](double x) { return std::log(std::max(x, floor)); },
      [floor](double x, double) { return x > floor ? 1.0 / x : 0.0; });
}

Var minimum(Var a, Var b) {
  Tape& tape = same_tape(a, b, "minimum");
  require_same_shape(a.value(), b.value(), "minimum");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Tensor y(av.shape());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::min(av[i], bv[i]);
  const std::size_t ia = a.id(), ib = b.id();
  return tape.push(std::move(y), "minimum", [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    const Tensor& av = t.value_of(ia);
    const Tensor& bv = t.value_of(ib);
    // Ties route the gradient to the first operand.
    {
      Tensor& ga = t.grad_buffer(ia);
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (av[i] <= bv[i]) ga[i] += g[i];
      }
    }
    Tensor& gb = t.grad_buffer(ib);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (av[i] > bv[i]) gb[i] += g[i];
    }
  });
}

Var matvec(Var w, Var x) {
  Tape& tape = same_tape(w, x, "matvec");
  const Tensor& wv = w.value();
  const Tensor& xv = x.value();
  require_rank(wv, 2, "matvec");
  const std::size_t m = wv.rows(), n = wv.cols();
  if (xv.size() != n) {
    throw NumericError("matvec: " + shape_string(wv.shape()) + " times " +
                       shape_string(xv.shape()));
  }
  Tensor y({m});
  kp::gemv(false, m, n, wv.data(), xv.data(), 0.0, y.data());
  const std::size_t iw = w.id(), ix = x.id();
  return tape.push(std::move(y), "matvec", [iw, ix, m, n](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    kp::ger(m, n, g.data(), t.value_of(ix).data(), t.grad_buffer(iw).data());
    kp::gemv(true, n, m, t.value_of(iw).data(), g.data(), 1.0,
             t.grad_buffer(ix).data());
  });
}

Var matmul(Var a, Var b, bool trans_b) {
  Tape& tape = same_tape(a, b, "matmul");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_rank(av, 2, "matmul");
  require_rank(bv, 2, "matmul");
  const std::size_t r = av.rows(), k = av.cols();
  const std::size_t bk = trans_b ? bv.cols() : bv.rows();
  const std::size_t c = trans_b ? bv.rows() : bv.cols();
  if (bk != k) {
    throw NumericError("matmul: " + shape_string(av.shape()) + " times " +
                       shape_string(bv.shape()) + (trans_b ? "^T" : ""));
  }
  Tensor y({r, c});
  kp::gemm(false, trans_b, r, c, k, av.data(), bv.data(), 0.0, y.data());
  const std::size_t ia = a.id(), ib = b.id();
  return tape.push(std::move(y), "matmul",
                   [ia, ib, r, c, k, trans_b](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);  // r x c
    const Tensor& av = t.value_of(ia);
    const Tensor& bv = t.value_of(ib);
    if (!trans_b) {
      // dA = G B^T ; dB = A^T G
      kp::gemm(false, true, r, k, c, g.data(), bv.data(), 1.0,
               t.grad_buffer(ia).data());
      kp::gemm(true, false, k, c, r, av.data(), g.data(), 1.0,
               t.grad_buffer(ib).data());
    } else {
      // B stored c x k. dA = G B ; dB = G^T A
      kp::gemm(false, false, r, k, c, g.data(), bv.data(), 1.0,
               t.grad_buffer(ia).data());
      kp::gemm(true, false, c, k, r, g.data(), av.data(), 1.0,
               t.grad_buffer(ib).data());
    }
  });
}

Var weighted_rows(Var h, Var a) {
  Tape& tape = same_tape(h, a, "weighted_rows");
  const Tensor& hv = h.value();
  const Tensor& av = a.value();
  require_rank(hv, 2, "weighted_rows");
  const std::size_t l = hv.rows(), d = hv.cols();
  if (av.size() != l) throw NumericError("weighted_rows: weight length mismatch");
  Tensor y({d});
  kp::gemv(true, d, l, hv.data(), av.data(), 0.0, y.data());
  const std::size_t ih = h.id(), ia = a.id();
  return tape.push(std::move(y), "weighted_rows",
                   [ih, ia, l, d](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    kp::ger(l, d, t.value_of(ia).data(), g.data(), t.grad_buffer(ih).data());
    kp::gemv(false, l, d, t.value_of(ih).data(), g.data(), 1.0,
             t.grad_buffer(ia).data());
  });
}

Var add_rows(Var m, Var v) {
  Tape& tape = same_tape(m, v, "add_rows");
  const Tensor& mv = m.value();
  require_rank(mv, 2, "add_rows");
  const std::size_t l = mv.rows(), d = mv.cols();
  if (v.value().size() != d) throw NumericError("add_rows: width mismatch");
  Tensor y = mv;
  const Tensor& vv = v.value();
  for (std::size_t r = 0; r < l; ++r) {
    for (std::size_t j = 0; j < d; ++j) y.at(r, j) += vv[j];
  }
  const std::size_t im = m.id(), iv = v.id();
  return tape.push(std::move(y), "add_rows", [im, iv, l, d](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    {
      Tensor& gm = t.grad_buffer(im);
      for (std::size_t i = 0; i < g.size(); ++i) gm[i] += g[i];
    }
    Tensor& gv = t.grad_buffer(iv);
    for (std::size_t r = 0; r < l; ++r) {
      for (std::size_t j = 0; j < d; ++j) gv[j] += g.at(r, j);
    }
  });
}

Var outer(Var u, Var v) {
  Tape& tape = same_tape(u, v, "outer");
  const std::size_t l = u.value().size(), d = v.value().size();
  Tensor y({l, d});
  kp::ger(l, d, u.value().data(), v.value().data(), y.data());
  const std::size_t iu = u.id(), iv = v.id();
  return tape.push(std::move(y), "outer", [iu, iv, l, d](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    kp::gemv(false, l, d, g.data(), t.value_of(iv).data(), 1.0,
             t.grad_buffer(iu).data());
    kp::gemv(true, d, l, g.data(), t.value_of(iu).data(), 1.0,
             t.grad_buffer(iv).data());
  });
}

Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw NumericError("concat: no inputs");
  Tape& tape = parts.front().tape();
  std::vector<double> out;
  std::vector<std::size_t> ids;
  std::vector<std::size_t> offsets;
  for (Var p : parts) {
    same_tape(parts.front(), p, "concat");
    offsets.push_back(out.size());
    ids.push_back(p.id());
    const auto& v = p.value().values();
    out.insert(out.end(), v.begin(), v.end());
  }
  return tape.push(Tensor::vector(std::move(out)), "concat",
                   [ids, offsets](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      Tensor& gp = t.grad_buffer(ids[k]);
      for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += g[offsets[k] + i];
    }
  });
}

Var slice(Var v, std::size_t offset, std::size_t length) {
  const Tensor& x = v.value();
  if (length == 0 || offset + length > x.size()) {
    throw NumericError("slice: range out of bounds");
  }
  std::vector<double> out(x.values().begin() + offset,
                          x.values().begin() + offset + length);
  const std::size_t iv = v.id();
  return v.tape().push(Tensor::vector(std::move(out)), "slice",
                       [iv, offset](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    Tensor& gv = t.grad_buffer(iv);
    for (std::size_t i = 0; i < g.size(); ++i) gv[offset + i] += g[i];
  });
}

Var stack_rows(std::span<const Var> rows) {
  if (rows.empty()) throw NumericError("stack_rows: no rows");
  Tape& tape = rows.front().tape();
  const std::size_t d = rows.front().value().size();
  std::vector<double> out;
  out.reserve(rows.size() * d);
  std::vector<std::size_t> ids;
  for (Var r : rows) {
    same_tape(rows.front(), r, "stack_rows");
    if (r.value().size() != d) throw NumericError("stack_rows: ragged rows");
    ids.push_back(r.id());
    const auto& v = r.value().values();
    out.insert(out.end(), v.begin(), v.end());
  }
  return tape.push(Tensor::matrix(rows.size(), d, std::move(out)), "stack_rows",
                   [ids, d](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    for (std::size_t r = 0; r < ids.size(); ++r) {
      Tensor& gr = t.grad_buffer(ids[r]);
      for (std::size_t j = 0; j < d; ++j) gr[j] += g[r * d + j];
    }
  });
}

Var row(Var m, std::size_t index) {
  const Tensor& mv = m.value();
  require_rank(mv, 2, "row");
  if (index >= mv.rows()) throw NumericError("row: index out of range");
  const auto r = mv.row(index);
  const std::size_t im = m.id(), d = mv.cols();
  return m.tape().push(Tensor::vector({r.begin(), r.end()}), "row",
                       [im, index, d](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    double* dst = t.grad_buffer(im).data().data() + index * d;
    for (std::size_t j = 0; j < d; ++j) dst[j] += g[j];
  });
}

Var gather_rows(Var m, std::span<const std::size_t> indices) {
  const Tensor& mv = m.value();
  require_rank(mv, 2, "gather_rows");
  if (indices.empty()) throw NumericError("gather_rows: no indices");
  const std::size_t d = mv.cols();
  std::vector<double> out;
  out.reserve(indices.size() * d);
  for (std::size_t idx : indices) {
    if (idx >= mv.rows()) throw NumericError("gather_rows: index out of range");
    const auto r = mv.row(idx);
    out.insert(out.end(), r.begin(), r.end());
  }
  std::vector<std::size_t> idx_copy(indices.begin(), indices.end());
  const std::size_t im = m.id();
  return m.tape().push(Tensor::matrix(indices.size(), d, std::move(out)),
                       "gather_rows", [im, idx_copy, d](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    Tensor& gm = t.grad_buffer(im);
    for (std::size_t r = 0; r < idx_copy.size(); ++r) {
      double* dst = gm.data().data() + idx_copy[r] * d;
      for (std::size_t j = 0; j < d; ++j) dst[j] += g[r * d + j];
    }
  });
}

Var dot(Var a, Var b) {
  Tape& tape = same_tape(a, b, "dot");
  if (a.value().size() != b.value().size()) {
    throw NumericError("dot: length mismatch");
  }
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  double acc = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) acc += av[i] * bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return tape.push(Tensor::scalar(acc), "dot", [ia, ib](Tape& t, std::size_t self) {
    const double g = (*t.grad_if_any(self))[0];
    const Tensor& av = t.value_of(ia);
    const Tensor& bv = t.value_of(ib);
    {
      Tensor& ga = t.grad_buffer(ia);
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g * bv[i];
    }
    Tensor& gb = t.grad_buffer(ib);
    for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g * av[i];
  });
}

Var sum(Var a) {
  double acc = 0.0;
  for (double v : a.value().values()) acc += v;
  const std::size_t ia = a.id();
  return a.tape().push(Tensor::scalar(acc), "sum", [ia](Tape& t, std::size_t self) {
    const double g = (*t.grad_if_any(self))[0];
    for (double& v : t.grad_buffer(ia).values()) v += g;
  });
}

Var pick(Var v, std::size_t index) {
  if (index >= v.value().size()) throw NumericError("pick: index out of range");
  const std::size_t iv = v.id();
  return v.tape().push(Tensor::scalar(v.value()[index]), "pick",
                       [iv, index](Tape& t, std::size_t self) {
    t.grad_buffer(iv)[index] += (*t.grad_if_any(self))[0];
  });
}

Var add_n(std::span<const Var> scalars) {
  if (scalars.empty()) throw NumericError("add_n: no inputs");
  Tape& tape = scalars.front().tape();
  double acc = 0.0;
  std::vector<std::size_t> ids;
  for (Var s : scalars) {
    same_tape(scalars.front(), s, "add_n");
    acc += s.item();
    ids.push_back(s.id());
  }
  return tape.push(Tensor::scalar(acc), "add_n", [ids](Tape& t, std::size_t self) {
    const double g = (*t.grad_if_any(self))[0];
    for (std::size_t id : ids) t.grad_buffer(id)[0] += g;
  });
}

Var softmax(Var v, MaskView mask) {
  const Tensor& x = v.value();
  if (x.empty()) throw NumericError("softmax: empty input");
  check_mask(mask, x.size(), "softmax");
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (valid_at(mask, i)) peak = std::max(peak, x[i]);
  }
  if (!std::isfinite(peak)) throw NumericError("softmax: every entry is masked");
  Tensor y(x.shape(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!valid_at(mask, i)) continue;
    y[i] = std::exp(x[i] - peak);
    total += y[i];
  }
  for (double& p : y.values()) p /= total;
  const std::size_t iv = v.id();
  return v.tape().push(std::move(y), "softmax", [iv](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    const Tensor& y = t.value_of(self);
    double inner = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) inner += g[i] * y[i];
    Tensor& gv = t.grad_buffer(iv);
    for (std::size_t i = 0; i < g.size(); ++i) gv[i] += y[i] * (g[i] - inner);
  });
}

Var mean_rows(Var m, MaskView row_mask) {
  const Tensor& mv = m.value();
  require_rank(mv, 2, "mean_rows");
  const std::size_t l = mv.rows(), d = mv.cols();
  check_mask(row_mask, l, "mean_rows");
  std::size_t count = 0;
  Tensor y({d}, 0.0);
  for (std::size_t r = 0; r < l; ++r) {
    if (!valid_at(row_mask, r)) continue;
    ++count;
    for (std::size_t j = 0; j < d; ++j) y[j] += mv.at(r, j);
  }
  if (count == 0) throw NumericError("mean_rows: every row is masked");
  for (double& v : y.values()) v /= static_cast<double>(count);
  Mask mask(row_mask.begin(), row_mask.end());
  const std::size_t im = m.id();
  return m.tape().push(std::move(y), "mean_rows",
                       [im, mask, l, d, count](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    Tensor& gm = t.grad_buffer(im);
    const double inv = 1.0 / static_cast<double>(count);
    for (std::size_t r = 0; r < l; ++r) {
      if (!mask.empty() && !mask[r]) continue;
      for (std::size_t j = 0; j < d; ++j) gm.at(r, j) += g[j] * inv;
    }
  });
}

namespace {

// Shared body of the two max-pooling directions. `along_cols` pools each row
// over its columns.
Var max_pool(Var m, MaskView mask, bool along_cols, const char* op) {
  const Tensor& mv = m.value();
  require_rank(mv, 2, op);
  const std::size_t rows = mv.rows(), cols = mv.cols();
  const std::size_t outer_n = along_cols ? rows : cols;
  const std::size_t inner_n = along_cols ? cols : rows;
  check_mask(mask, inner_n, op);
  Tensor y({outer_n});
  std::vector<std::size_t> arg(outer_n, 0);
  for (std::size_t o = 0; o < outer_n; ++o) {
    double best = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t k = 0; k < inner_n; ++k) {
      if (!valid_at(mask, k)) continue;
      const double v = along_cols ? mv.at(o, k) : mv.at(k, o);
      if (!found || v > best) {
        best = v;
        arg[o] = k;
        found = true;
      }
    }
    if (!found) throw NumericError(std::string(op) + ": every entry is masked");
    y[o] = best;
  }
  const std::size_t im = m.id();
  return m.tape().push(std::move(y), op,
                       [im, arg, along_cols](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    Tensor& gm = t.grad_buffer(im);
    for (std::size_t o = 0; o < arg.size(); ++o) {
      if (along_cols) {
        gm.at(o, arg[o]) += g[o];
      } else {
        gm.at(arg[o], o) += g[o];
      }
    }
  });
}

}  // namespace

Var max_over_cols(Var m, MaskView col_mask) {
  return max_pool(m, col_mask, true, "max_over_cols");
}

Var max_over_rows(Var m, MaskView row_mask) {
  return max_pool(m, row_mask, false, "max_over_rows");
}

Var pointer_mixture(Var p_vocab, Var alpha, Var p_gen,
                    std::span<const std::size_t> source_ids,
                    std::size_t extended_size) {
  Tape& tape = same_tape(p_vocab, alpha, "pointer_mixture");
  same_tape(p_vocab, p_gen, "pointer_mixture");
  const Tensor& pv = p_vocab.value();
  const Tensor& av = alpha.value();
  const double pg = p_gen.item();
  if (av.size() != source_ids.size()) {
    throw NumericError("pointer_mixture: attention/source length mismatch");
  }
  if (extended_size < pv.size()) {
    throw NumericError("pointer_mixture: extended size below vocabulary size");
  }
  Tensor y({extended_size}, 0.0);
  for (std::size_t w = 0; w < pv.size(); ++w) y[w] = pg * pv[w];
  for (std::size_t i = 0; i < source_ids.size(); ++i) {
    if (source_ids[i] >= extended_size) {
      throw NumericError("pointer_mixture: source id beyond extended vocabulary");
    }
    y[source_ids[i]] += (1.0 - pg) * av[i];
  }
  std::vector<std::size_t> src(source_ids.begin(), source_ids.end());
  const std::size_t iv = p_vocab.id(), ia = alpha.id(), ig = p_gen.id();
  return tape.push(std::move(y), "pointer_mixture",
                   [iv, ia, ig, src](Tape& t, std::size_t self) {
    const Tensor& g = *t.grad_if_any(self);
    const Tensor& pv = t.value_of(iv);
    const Tensor& av = t.value_of(ia);
    const double pg = t.value_of(ig)[0];
    double dpg = 0.0;
    {
      Tensor& gv = t.grad_buffer(iv);
      for (std::size_t w = 0; w < pv.size(); ++w) {
        gv[w] += pg * g[w];
        dpg += g[w] * pv[w];
      }
    }
    Tensor& ga = t.grad_buffer(ia);
    for (std::size_t i = 0; i < src.size(); ++i) {
      ga[i] += (1.0 - pg) * g[src[i]];
      dpg -= g[src[i]] * av[i];
    }
    t.grad_buffer(ig)[0] += dpg;
  });
}

Var apply_mask(Var a, const Tensor& mask) {
  require_same_shape(a.value(), mask, "apply_mask");
  return mul(a, a.tape().constant(mask));
}

}  // namespace ag

}  // namespace asas
