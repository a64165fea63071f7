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

// Shared fixtures and plain-double reference implementations for the tests.

#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "asas/corpus.hpp"
#include "asas/model.hpp"
#include "asas/synthetic.hpp"
#include "asas/trainer.hpp"

namespace asas::testing {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline Vec random_vec(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec v(n);
  for (double& x : v) x = u(rng);
  return v;
}

inline Mat to_mat(const Tensor& t) {
  Mat m(t.rows(), Vec(t.cols()));
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) m[r][c] = t.at(r, c);
  }
  return m;
}

inline Vec to_vec(const Tensor& t) { return t.values(); }

inline Vec matvec(const Mat& w, const Vec& x) {
  Vec y(w.size(), 0.0);
  for (std::size_t r = 0; r < w.size(); ++r) {
    for (std::size_t c = 0; c < x.size(); ++c) y[r] += w[r][c] * x[c];
  }
  return y;
}

inline Vec plus(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vec cat(Vec a, const Vec& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline Vec soft(const Vec& v) {
  double m = v[0];
  for (double x : v) m = std::max(m, x);
  Vec out(v.size());
  double z = 0;
  for (std::size_t i = 0; i < v.size(); ++i) z += out[i] = std::exp(v[i] - m);
  for (double& x : out) x /= z;
  return out;
}

// One LSTM step evaluated gate by gate (order: input, forget, output, candidate).
inline std::pair<Vec, Vec> lstm_oracle(const Mat& w, const Vec& b, const Vec& x, const Vec& h,
                                       const Vec& c) {
  const std::size_t H = h.size();
  const Vec z = plus(matvec(w, cat(x, h)), b);
  Vec h2(H), c2(H);
  for (std::size_t j = 0; j < H; ++j) {
    const double i = sig(z[j]), f = sig(z[H + j]), o = sig(z[2 * H + j]),
                 g = std::tanh(z[3 * H + j]);
    c2[j] = f * c[j] + i * g;
    h2[j] = o * std::tanh(c2[j]);
  }
  return {h2, c2};
}

inline Vec row_of(const Tensor& t, std::size_t r) {
  const auto s = t.row(r);
  return Vec(s.begin(), s.end());
}

inline void zero_all(Model& m) {
  for (ParamId id = 0; id < m.store.size(); ++id) {
    for (double& x : m.store[id].value.values()) x = 0.0;
  }
}

// A small templated corpus and its encoding under a vocabulary built from it.
struct TinyData {
  std::vector<QAExample> examples;
  Vocabulary vocab;
  std::vector<EncodedQuestion> encoded;
};

inline TinyData tiny_data(std::size_t questions, std::size_t candidates, std::size_t vocab_size,
                          std::uint64_t seed = 1, std::size_t max_filler = 0) {
  SyntheticOptions o;
  o.train_questions = questions;
  o.dev_questions = 0;
  o.test_questions = 0;
  o.candidates = candidates;
  o.max_filler = max_filler;
  o.seed = seed;
  TinyData d;
  d.examples = make_synthetic(o).train;
  d.vocab = Vocabulary::build(corpus_token_lists(d.examples), vocab_size);
  d.encoded = encode_dataset(d.examples, d.vocab);
  return d;
}

inline ModelDims tiny_dims(std::size_t vocab, std::size_t width = 8, double init = 0.3) {
  return ModelDims{vocab, width, width, width, init};
}

inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("asas-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::vector<PairRef> all_pairs(std::span<const EncodedQuestion> data) {
  std::vector<PairRef> out;
  for (std::size_t q = 0; q < data.size(); ++q) {
    for (std::size_t c = 0; c < data[q].candidates.size(); ++c) out.push_back({q, c});
  }
  return out;
}

}  // namespace asas::testing
