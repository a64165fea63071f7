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

// Dense linear-algebra kernels used by the autodiff tape.
//
// Every kernel exists twice: `serial::` is the reference loop nest and
// `parallel::` distributes independent output rows over OpenMP threads.
// Each output element is accumulated in the same order in both versions, so
// results are bit-identical regardless of thread count.

#pragma once

#include <cstddef>
#include <span>

namespace asas::kernels {

// Work (multiply-adds) below which the parallel kernels stay on one thread.
inline constexpr std::size_t kParallelThreshold = 1 << 15;

// All matrices are row-major. `trans_a` means A is stored k x m and used
// transposed; likewise for `trans_b` (stored n x k).

namespace serial {

// C[m x n] = beta * C + op(A)[m x k] * op(B)[k x n]
void gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n,
          std::size_t k, std::span<const double> a, std::span<const double> b,
          double beta, std::span<double> c);

// y[m] = beta * y + op(A) x. A is m x k, or k x m when trans_a.
void gemv(bool trans_a, std::size_t m, std::size_t k, std::span<const double> a,
          std::span<const double> x, double beta, std::span<double> y);

// A[m x n] += x[m] * y[n]^T
void ger(std::size_t m, std::size_t n, std::span<const double> x,
         std::span<const double> y, std::span<double> a);

}  // namespace serial

namespace parallel {

void gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n,
          std::size_t k, std::span<const double> a, std::span<const double> b,
          double beta, std::span<double> c);

void gemv(bool trans_a, std::size_t m, std::size_t k, std::span<const double> a,
          std::span<const double> x, double beta, std::span<double> y);

void ger(std::size_t m, std::size_t n, std::span<const double> x,
         std::span<const double> y, std::span<double> a);

}  // namespace parallel

}  // namespace asas::kernels
