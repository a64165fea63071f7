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

#include <cmath>
#include <random>

#include "asas/alignment.hpp"
#include "asas/decoder.hpp"
#include "asas/losses.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace asas;
using namespace asas::testing;

namespace {

// d_s = 2, encoded width 4.
Model align_model(double init = 0.8, std::uint64_t seed = 5) {
  return Model(ModelDims{10, 3, 2, 3, init}, seed);
}

Var constant_rows(Tape& tape, const Mat& m) {
  Tensor t({m.size(), m[0].size()});
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m[0].size(); ++c) t.at(r, c) = m[r][c];
  }
  return tape.constant(t);
}

Mat random_mat(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  Mat m(r);
  for (auto& row : m) row = random_vec(c, rng);
  return m;
}

}  // namespace

TEST_CASE("co-attention over single rows") {
  const Model m = align_model();
  std::mt19937_64 rng(1);
  Tape tape;
  const Mat hq = random_mat(1, 4, rng), hs = random_mat(1, 2, rng);
  const auto reps = coattention(tape, m, constant_rows(tape, hq), constant_rows(tape, hs));
  CHECK(reps.alpha_q.value() == Tensor::vector({1.0}));
  CHECK(reps.alpha_a.value() == Tensor::vector({1.0}));
  const Vec proj = plus(matvec(to_mat(m.store[m.alignment.q_proj_w].value), hq[0]),
                        to_vec(m.store[m.alignment.q_proj_b].value));
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(reps.r_q.value()[j] == doctest::Approx(proj[j]).epsilon(1e-14));
    CHECK(reps.r_a.value()[j] == hs[0][j]);
  }
}

TEST_CASE("zero bilinear weight gives uniform co-attention") {
  Model m = align_model();
  m.store[m.alignment.bilinear].value.values().assign(4, 0.0);
  std::mt19937_64 rng(2);
  Tape tape;
  const Mat hq = random_mat(3, 4, rng), hs = random_mat(4, 2, rng);
  const Mask qmask{1, 1, 0};
  const auto reps =
      coattention(tape, m, constant_rows(tape, hq), constant_rows(tape, hs), qmask);
  for (double v : reps.scores.value().values()) CHECK(v == 0.0);
  CHECK(reps.alpha_q.value()[0] == doctest::Approx(0.5));
  CHECK(reps.alpha_q.value()[2] == 0.0);
  for (std::size_t j = 0; j < 2; ++j) {
    double mean = 0;
    for (const auto& row : hs) mean += row[j] / 4;
    CHECK(reps.r_a.value()[j] == doctest::Approx(mean).epsilon(1e-14));
  }
}

TEST_CASE("co-attention matches the scalar oracle") {
  const Model m = align_model(0.9, 8);
  std::mt19937_64 rng(3);
  Tape tape;
  const Mat hq = random_mat(2, 4, rng), hs = random_mat(3, 2, rng);
  const auto reps = coattention(tape, m, constant_rows(tape, hq), constant_rows(tape, hs));

  const Mat w = to_mat(m.store[m.alignment.q_proj_w].value),
            u = to_mat(m.store[m.alignment.bilinear].value);
  const Vec b = to_vec(m.store[m.alignment.q_proj_b].value);
  Mat proj(2);
  for (std::size_t i = 0; i < 2; ++i) proj[i] = plus(matvec(w, hq[i]), b);
  Mat score(2, Vec(3));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0;
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t c = 0; c < 2; ++c) s += proj[i][a] * u[a][c] * hs[j][c];
      }
      score[i][j] = std::tanh(s);
    }
  }
  Vec row_max(2, -2.0), col_max(3, -2.0);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      row_max[i] = std::max(row_max[i], score[i][j]);
      col_max[j] = std::max(col_max[j], score[i][j]);
    }
  }
  const Vec aq = soft(row_max), aa = soft(col_max);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(reps.alpha_q.value()[i] == doctest::Approx(aq[i]).epsilon(1e-12));
  }
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(reps.alpha_a.value()[j] == doctest::Approx(aa[j]).epsilon(1e-12));
  }
  for (std::size_t c = 0; c < 2; ++c) {
    const double rq = aq[0] * proj[0][c] + aq[1] * proj[1][c];
    const double ra = aa[0] * hs[0][c] + aa[1] * hs[1][c] + aa[2] * hs[2][c];
    CHECK(reps.r_q.value()[c] == doctest::Approx(rq).epsilon(1e-12));
    CHECK(reps.r_a.value()[c] == doctest::Approx(ra).epsilon(1e-12));
  }
}

TEST_CASE("permuting summary rows permutes alpha_a and keeps r_a") {
  const Model m = align_model(0.9, 9);
  std::mt19937_64 rng(4);
  Tape tape;
  const Mat hq = random_mat(3, 4, rng), hs = random_mat(4, 2, rng);
  const Mat perm{hs[2], hs[0], hs[3], hs[1]};
  const auto a = coattention(tape, m, constant_rows(tape, hq), constant_rows(tape, hs));
  const auto b = coattention(tape, m, constant_rows(tape, hq), constant_rows(tape, perm));
  const std::size_t src[] = {2, 0, 3, 1};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(b.alpha_a.value()[k] == doctest::Approx(a.alpha_a.value()[src[k]]).epsilon(1e-14));
  }
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(b.r_a.value()[c] == doctest::Approx(a.r_a.value()[c]).epsilon(1e-13));
    CHECK(b.r_q.value()[c] == doctest::Approx(a.r_q.value()[c]).epsilon(1e-13));
  }
}

TEST_CASE("co-attention rejects an empty summary") {
  const Model m = align_model();
  Tape tape;
  CHECK_THROWS_AS(coattention(tape, m, tape.constant(Tensor({2, 4})), tape.constant(Tensor({0, 2}))),
                  NumericError);
}

TEST_CASE("classifier") {
  Model m = align_model();
  auto& w = m.store[m.alignment.cls_w].value;
  auto& b = m.store[m.alignment.cls_b].value;
  Tape tape;
  const Var rq = tape.constant(Tensor::vector({0.4, -1.0}));
  const Var ra = tape.constant(Tensor::vector({2.0, 0.3}));

  SUBCASE("zero parameters") {
    w.values().assign(w.size(), 0.0);
    b.values().assign(2, 0.0);
    CHECK(classify(tape, m, rq, ra).value() == Tensor::vector({0.5, 0.5}));
  }
  SUBCASE("bias (0, ln 3)") {
    w.values().assign(w.size(), 0.0);
    b = Tensor::vector({0.0, std::log(3.0)});
    const Tensor p = classify(tape, m, rq, ra).value();
    CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.75).epsilon(1e-15));
  }
  SUBCASE("a shared logit shift changes nothing") {
    const Tensor before = classify(tape, m, rq, ra).value();
    b[0] += 3.25;
    b[1] += 3.25;
    const Tensor after = classify(tape, m, rq, ra).value();
    CHECK(after[1] == doctest::Approx(before[1]).epsilon(1e-14));
  }
}

TEST_CASE("qa loss") {
  const double certain[] = {1.0};
  const int pos[] = {1};
  CHECK(qa_loss(certain, pos) == doctest::Approx(0.0).epsilon(1e-11));
  const double half[] = {0.5, 0.5};
  const int both[] = {1, 0};
  CHECK(qa_loss(half, both) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  const double sym[] = {0.9, 0.1};
  const int sym_labels[] = {1, 0};
  const double one[] = {0.9};
  const double two[] = {0.1};
  const int neg[] = {0};
  CHECK(qa_loss(one, pos) == doctest::Approx(qa_loss(two, neg)).epsilon(1e-15));
  CHECK(qa_loss(sym, sym_labels) == doctest::Approx(-std::log(0.9)).epsilon(1e-15));

  Tape tape;
  const Var probs = tape.constant(Tensor::vector({0.5, 0.5}));
  CHECK(qa_loss(probs, 0).item() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("summary loss") {
  const std::vector<std::vector<double>> certain{{0, 1, 0}, {1, 0, 0}};
  const std::size_t ct[] = {1, 0};
  CHECK(sum_loss(certain, ct) == 0.0);

  const std::vector<std::vector<double>> d{{0.5, 0.5}, {0.25, 0.75}};
  const std::size_t targets[] = {0, 0};
  CHECK(sum_loss(d, targets) == doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(sum_loss(d, targets) == doctest::Approx(1.039721).epsilon(1e-6));

  const std::size_t bad[] = {0, 5};
  CHECK_THROWS_AS(sum_loss(d, bad), std::out_of_range);
}

TEST_CASE("summary loss on a copied oov") {
  Tape tape;
  const Var pv = tape.constant(Tensor::vector({0.25, 0.25, 0.25, 0.25}));
  const Var alpha = tape.constant(Tensor::vector({0.8, 0.2}));
  const std::vector<std::size_t> src{4, 2};
  const Var p = final_distribution(pv, alpha, tape.constant(Tensor::scalar(0.0)), src, 5);
  const Var dists[] = {p};
  const std::size_t target[] = {4};
  CHECK(sum_loss(dists, target).item() == doctest::Approx(-std::log(0.8)).epsilon(1e-14));
}

TEST_CASE("coverage loss") {
  SUBCASE("single step") {
    const std::vector<std::vector<double>> a{{0.3, 0.7}}, c{{0.0, 0.0}};
    CHECK(cov_loss(a, c) == 0.0);
  }
  SUBCASE("two identical one-hot steps") {
    const std::vector<std::vector<double>> a{{0, 1, 0}, {0, 1, 0}}, c{{0, 0, 0}, {0, 1, 0}};
    CHECK(cov_loss(a, c) == 0.5);
  }
  SUBCASE("disjoint one-hot steps") {
    const std::vector<std::vector<double>> a{{1, 0}, {0, 1}}, c{{0, 0}, {1, 0}};
    CHECK(cov_loss(a, c) == 0.0);
  }
  SUBCASE("tape version agrees") {
    Tape tape;
    const Var a[] = {tape.constant(Tensor::vector({0.6, 0.4})),
                     tape.constant(Tensor::vector({0.5, 0.5}))};
    const Var c[] = {tape.constant(Tensor::vector({0.0, 0.0})),
                     tape.constant(Tensor::vector({0.6, 0.4}))};
    CHECK(cov_loss(a, c).item() == doctest::Approx((0.5 + 0.4) / 2).epsilon(1e-15));
  }
}
