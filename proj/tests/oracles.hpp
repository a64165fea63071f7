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

// Brute-force metric definitions, written without reusing library code.
// Inputs are unsorted candidate lists.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "asas/metrics.hpp"

namespace asas::oracle {

struct Item {
  std::string id;
  double score;
  int label;
  std::size_t length;
};

// 1-based rank: one plus the number of items placed ahead.
inline std::size_t rank_of(const std::vector<Item>& items, std::size_t i) {
  std::size_t ahead = 0;
  for (std::size_t j = 0; j < items.size(); ++j) {
    if (j == i) continue;
    if (items[j].score > items[i].score ||
        (items[j].score == items[i].score && items[j].id < items[i].id)) {
      ++ahead;
    }
  }
  return ahead + 1;
}

inline bool any_relevant(const std::vector<Item>& items) {
  for (const Item& it : items) {
    if (it.label == 1) return true;
  }
  return false;
}

inline double ap(const std::vector<Item>& items) {
  double sum = 0;
  std::size_t rel = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].label != 1) continue;
    ++rel;
    const std::size_t k = rank_of(items, i);
    std::size_t rel_in_top = 0;
    for (std::size_t j = 0; j < items.size(); ++j) {
      if (items[j].label == 1 && rank_of(items, j) <= k) ++rel_in_top;
    }
    sum += static_cast<double>(rel_in_top) / static_cast<double>(k);
  }
  return rel ? sum / static_cast<double>(rel) : 0.0;
}

inline double rr(const std::vector<Item>& items) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].label != 1) continue;
    const std::size_t k = rank_of(items, i);
    if (best == 0 || k < best) best = k;
  }
  return best ? 1.0 / static_cast<double>(best) : 0.0;
}

inline bool top_is_relevant(const std::vector<Item>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (rank_of(items, i) == 1) return items[i].label == 1;
  }
  return false;
}

inline RankedList to_list(const std::string& qid, const std::vector<Item>& items) {
  std::vector<RankedCandidate> c;
  for (const Item& it : items) c.push_back({it.id, it.score, it.label, it.length});
  return RankedList(qid, c);
}

struct Prf {
  double p = 0, r = 0, f = 0;
};

inline Prf prf(double overlap, std::size_t cand, std::size_t ref) {
  Prf s;
  if (cand) s.p = overlap / static_cast<double>(cand);
  if (ref) s.r = overlap / static_cast<double>(ref);
  if (s.p + s.r > 0) s.f = 2 * s.p * s.r / (s.p + s.r);
  return s;
}

inline std::vector<Tokens> grams(const Tokens& t, std::size_t n) {
  std::vector<Tokens> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) out.emplace_back(t.begin() + i, t.begin() + i + n);
  return out;
}

inline Prf rouge_n(const Tokens& cand, const Tokens& ref, std::size_t n) {
  const auto cg = grams(cand, n), rg = grams(ref, n);
  std::vector<Tokens> seen;
  double overlap = 0;
  for (const Tokens& g : cg) {
    if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
    seen.push_back(g);
    const auto a = std::count(cg.begin(), cg.end(), g);
    const auto b = std::count(rg.begin(), rg.end(), g);
    overlap += static_cast<double>(std::min(a, b));
  }
  return prf(overlap, cg.size(), rg.size());
}

inline bool is_subsequence(const Tokens& s, const Tokens& t) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < t.size() && j < s.size(); ++i) {
    if (t[i] == s[j]) ++j;
  }
  return j == s.size();
}

// Longest common subsequence by enumerating every subsequence of `cand`.
inline std::size_t lcs(const Tokens& cand, const Tokens& ref) {
  std::size_t best = 0;
  const std::uint32_t n = static_cast<std::uint32_t>(cand.size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Tokens s;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.push_back(cand[i]);
    }
    if (s.size() > best && is_subsequence(s, ref)) best = s.size();
  }
  return best;
}

inline Prf rouge_l(const Tokens& cand, const Tokens& ref) {
  return prf(static_cast<double>(lcs(cand, ref)), cand.size(), ref.size());
}

// Per-bucket (questions, correct) by regrouping: linear scan of the edges.
inline std::map<std::size_t, std::pair<std::size_t, std::size_t>> regroup(
    const std::vector<std::vector<Item>>& lists, const std::vector<std::size_t>& edges) {
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> out;
  for (const auto& items : lists) {
    if (!any_relevant(items)) continue;
    const Item* gold = nullptr;
    for (const Item& it : items) {
      if (it.label == 1 && (!gold || it.id < gold->id)) gold = &it;
    }
    std::size_t b = 0;
    while (b < edges.size() && gold->length >= edges[b]) ++b;
    auto& slot = out[b];
    ++slot.first;
    if (top_is_relevant(items)) ++slot.second;
  }
  return out;
}

// Random ranked list with small integer scores so ties occur.
inline std::vector<Item> random_items(std::mt19937_64& rng, std::size_t max_len = 500) {
  std::uniform_int_distribution<int> count(1, 7), score(0, 5), label(0, 2);
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::vector<Item> items(static_cast<std::size_t>(count(rng)));
  const std::size_t offset = rng() % 101;
  for (std::size_t i = 0; i < items.size(); ++i) {
    // Distinct ids whose string order differs from insertion order.
    items[i] = {"a" + std::to_string((i * 37 + offset) % 101), score(rng) * 0.25,
                label(rng) == 0 ? 1 : 0, len(rng)};
  }
  return items;
}

inline Tokens random_tokens(std::mt19937_64& rng, std::size_t max_len) {
  static const Tokens alphabet{"a", "b", "c", "d", "e"};
  std::uniform_int_distribution<std::size_t> len(0, max_len), pick(0, alphabet.size() - 1);
  Tokens t(len(rng));
  for (auto& w : t) w = alphabet[pick(rng)];
  return t;
}

}  // namespace asas::oracle
