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

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

#include "asas/tape.hpp"

namespace asas {

inline constexpr double kProbFloor = 1e-12;

// Binary cross-entropy averaged over pairs, p clamped to [1e-12, 1 - 1e-12].
double qa_loss(std::span<const double> p_pos, std::span<const int> labels);
// -(1/T) sum_t log P_t(target_t). Throws std::out_of_range for a target
// outside a step's extended distribution.
double sum_loss(std::span<const std::vector<double>> distributions,
                std::span<const std::size_t> targets);
// (1/T) sum_t sum_i min(alpha_i^t, c_i^t).
double cov_loss(std::span<const std::vector<double>> attentions,
                std::span<const std::vector<double>> coverages);

// Tape versions for a single pair. `probs` is the classifier's (p_neg, p_pos).
Var qa_loss(Var probs, int label);
Var sum_loss(std::span<const Var> distributions, std::span<const std::size_t> targets);
Var cov_loss(std::span<const Var> attentions, std::span<const Var> coverages);

struct LossWeights {
  double qa = 1.0;
  double sum = 1.0;
  double cov = 1.0;
};

struct LossBreakdown {
  double qa = 0.0;
  double sum = 0.0;
  double cov = 0.0;
  double total = 0.0;
  std::size_t qa_pairs = 0;
  std::size_t summary_pairs = 0;
  std::size_t summary_tokens = 0;

  // total = qa * w.qa + sum * w.sum + cov * w.cov
  void compose(const LossWeights& w) { total = w.qa * qa + w.sum * sum + w.cov * cov; }
};

nlohmann::json to_json(const LossBreakdown& l);

}  // namespace asas
