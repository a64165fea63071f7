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

#include "asas/params.hpp"

#include <algorithm>
#include <stdexcept>

namespace asas {

std::string_view group_name(ParamGroup group) {
  switch (group) {
    case ParamGroup::kEmbeddings: return "embeddings";
    case ParamGroup::kEncoder: return "encoder";
    case ParamGroup::kDecoder: return "decoder";
    case ParamGroup::kPointer: return "pointer";
    case ParamGroup::kOutput: return "output";
    case ParamGroup::kAlignment: return "alignment";
  }
  return "?";
}

ParamGroup parse_group(std::string_view name) {
  for (ParamGroup g : kAllGroups) {
    if (group_name(g) == name) return g;
  }
  throw std::invalid_argument("unknown parameter group '" + std::string(name) +
                              "'");
}

std::vector<ParamGroup> parse_group_list(std::string_view list) {
  std::vector<ParamGroup> out;
  if (list == "none" || list.empty()) return out;
  if (list == "all") return {kAllGroups.begin(), kAllGroups.end()};
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const std::string_view item = list.substr(start, comma - start);
    if (!item.empty()) {
      const ParamGroup g = parse_group(item);
      if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    }
    start = comma + 1;
  }
  return out;
}

ParamId ParamStore::add(std::string name, ParamGroup group, Tensor value) {
  if (find(name)) throw std::invalid_argument("duplicate parameter " + name);
  params_.push_back({std::move(name), group, std::move(value)});
  return params_.size() - 1;
}

std::optional<ParamId> ParamStore::find(std::string_view name) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<bool> ParamStore::trainable_mask(
    std::span<const ParamGroup> frozen) const {
  std::vector<bool> mask(params_.size(), true);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    mask[i] = std::find(frozen.begin(), frozen.end(), params_[i].group) ==
              frozen.end();
  }
  return mask;
}

Tensor uniform_tensor(Shape shape, double scale, std::mt19937_64& rng) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (double& v : t.values()) v = dist(rng);
  return t;
}

}  // namespace asas
