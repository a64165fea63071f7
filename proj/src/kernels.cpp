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

#include "asas/kernels.hpp"

#include <cstdint>

namespace asas::kernels {
namespace {

// One output row of C. Shared by both variants so accumulation order is
// identical.
inline void gemm_row(std::size_t i, bool trans_a, bool trans_b, std::size_t m,
                     std::size_t n, std::size_t k, const double* a,
                     const double* b, double beta, double* c) {
  double* c_row = c + i * n;
  if (beta == 0.0) {
    for (std::size_t j = 0; j < n; ++j) c_row[j] = 0.0;
  } else if (beta != 1.0) {
    for (std::size_t j = 0; j < n; ++j) c_row[j] *= beta;
  }
  for (std::size_t p = 0; p < k; ++p) {
    const double a_ip = trans_a ? a[p * m + i] : a[i * k + p];
    if (a_ip == 0.0) continue;
    if (trans_b) {
      for (std::size_t j = 0; j < n; ++j) c_row[j] += a_ip * b[j * k + p];
    } else {
      const double* b_row = b + p * n;
      for (std::size_t j = 0; j < n; ++j) c_row[j] += a_ip * b_row[j];
    }
  }
}

inline void gemv_entry(std::size_t i, bool trans_a, std::size_t m,
                       std::size_t k, const double* a, const double* x,
                       double beta, double* y) {
  double acc = 0.0;
  if (trans_a) {
    for (std::size_t p = 0; p < k; ++p) acc += a[p * m + i] * x[p];
  } else {
    const double* a_row = a + i * k;
    for (std::size_t p = 0; p < k; ++p) acc += a_row[p] * x[p];
  }
  y[i] = (beta == 0.0 ? 0.0 : beta * y[i]) + acc;
}

inline void ger_row(std::size_t i, std::size_t n, const double* x,
                    const double* y, double* a) {
  const double xi = x[i];
  if (xi == 0.0) return;
  double* a_row = a + i * n;
  for (std::size_t j = 0; j < n; ++j) a_row[j] += xi * y[j];
}

}  // namespace

namespace serial {

void gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n,
          std::size_t k, std::span<const double> a, std::span<const double> b,
          double beta, std::span<double> c) {
  for (std::size_t i = 0; i < m; ++i) {
    gemm_row(i, trans_a, trans_b, m, n, k, a.data(), b.data(), beta, c.data());
  }
}

void gemv(bool trans_a, std::size_t m, std::size_t k, std::span<const double> a,
          std::span<const double> x, double beta, std::span<double> y) {
  for (std::size_t i = 0; i < m; ++i) {
    gemv_entry(i, trans_a, m, k, a.data(), x.data(), beta, y.data());
  }
}

void ger(std::size_t m, std::size_t n, std::span<const double> x,
         std::span<const double> y, std::span<double> a) {
  for (std::size_t i = 0; i < m; ++i) ger_row(i, n, x.data(), y.data(), a.data());
}

}  // namespace serial

namespace parallel {

void gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n,
          std::size_t k, std::span<const double> a, std::span<const double> b,
          double beta, std::span<double> c) {
  const auto rows = static_cast<std::int64_t>(m);
  const bool big = m * n * k >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::int64_t i = 0; i < rows; ++i) {
    gemm_row(static_cast<std::size_t>(i), trans_a, trans_b, m, n, k, a.data(),
             b.data(), beta, c.data());
  }
}

void gemv(bool trans_a, std::size_t m, std::size_t k, std::span<const double> a,
          std::span<const double> x, double beta, std::span<double> y) {
  const auto rows = static_cast<std::int64_t>(m);
  const bool big = m * k >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::int64_t i = 0; i < rows; ++i) {
    gemv_entry(static_cast<std::size_t>(i), trans_a, m, k, a.data(), x.data(),
               beta, y.data());
  }
}

void ger(std::size_t m, std::size_t n, std::span<const double> x,
         std::span<const double> y, std::span<double> a) {
  const auto rows = static_cast<std::int64_t>(m);
  const bool big = m * n >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::int64_t i = 0; i < rows; ++i) {
    ger_row(static_cast<std::size_t>(i), n, x.data(), y.data(), a.data());
  }
}

}  // namespace parallel

}  // namespace asas::kernels
