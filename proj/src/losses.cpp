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

#include "asas/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace asas {

double qa_loss(std::span<const double> p_pos, std::span<const int> labels) {
  if (p_pos.size() != labels.size()) throw std::invalid_argument("qa_loss: size mismatch");
  if (p_pos.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < p_pos.size(); ++i) {
    const double p = std::clamp(p_pos[i], kProbFloor, 1.0 - kProbFloor);
    total -= labels[i] * std::log(p) + (1 - labels[i]) * std::log(1.0 - p);
  }
  return total / static_cast<double>(p_pos.size());
}

double sum_loss(std::span<const std::vector<double>> distributions,
                std::span<const std::size_t> targets) {
  if (distributions.size() != targets.size()) {
    throw std::invalid_argument("sum_loss: step count mismatch");
  }
  if (targets.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (targets[t] >= distributions[t].size()) {
      throw std::out_of_range("sum_loss: target id " + std::to_string(targets[t]) +
                              " outside the extended vocabulary");
    }
    total -= std::log(std::max(distributions[t][targets[t]], kProbFloor));
  }
  return total / static_cast<double>(targets.size());
}

double cov_loss(std::span<const std::vector<double>> attentions,
                std::span<const std::vector<double>> coverages) {
  if (attentions.size() != coverages.size()) {
    throw std::invalid_argument("cov_loss: trace length mismatch");
  }
  if (attentions.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t t = 0; t < attentions.size(); ++t) {
    if (attentions[t].size() != coverages[t].size()) {
      throw std::invalid_argument("cov_loss: attention/coverage width mismatch");
    }
    for (std::size_t i = 0; i < attentions[t].size(); ++i) {
      total += std::min(attentions[t][i], coverages[t][i]);
    }
  }
  return total / static_cast<double>(attentions.size());
}

Var qa_loss(Var probs, int label) {
  return ag::affine(ag::log(ag::pick(probs, label == 1 ? 1 : 0), kProbFloor), -1.0);
}

Var sum_loss(std::span<const Var> distributions, std::span<const std::size_t> targets) {
  if (distributions.size() != targets.size() || targets.empty()) {
    throw std::invalid_argument("sum_loss: step count mismatch");
  }
  std::vector<Var> logs;
  logs.reserve(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (targets[t] >= distributions[t].size()) {
      throw std::out_of_range("sum_loss: target id " + std::to_string(targets[t]) +
                              " outside the extended vocabulary");
    }
    logs.push_back(ag::log(ag::pick(distributions[t], targets[t]), kProbFloor));
  }
  return ag::affine(ag::add_n(logs), -1.0 / static_cast<double>(targets.size()));
}

Var cov_loss(std::span<const Var> attentions, std::span<const Var> coverages) {
  if (attentions.size() != coverages.size() || attentions.empty()) {
    throw std::invalid_argument("cov_loss: trace length mismatch");
  }
  std::vector<Var> terms;
  terms.reserve(attentions.size());
  for (std::size_t t = 0; t < attentions.size(); ++t) {
    terms.push_back(ag::sum(ag::minimum(attentions[t], coverages[t])));
  }
  return ag::affine(ag::add_n(terms), 1.0 / static_cast<double>(attentions.size()));
}

nlohmann::json to_json(const LossBreakdown& l) {
  return nlohmann::json{{"L_qa", l.qa},         {"L_sum", l.sum},
                        {"L_cov", l.cov},       {"L_total", l.total},
                        {"qa_pairs", l.qa_pairs}, {"summary_pairs", l.summary_pairs},
                        {"summary_tokens", l.summary_tokens}};
}

}  // namespace asas
