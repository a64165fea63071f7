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

#include <array>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asas/tape.hpp"
#include "asas/tensor.hpp"

namespace asas {

// Named parameter groups used for checkpoint layout and transfer freezing.
enum class ParamGroup { kEmbeddings, kEncoder, kDecoder, kPointer, kOutput, kAlignment };

inline constexpr std::array<ParamGroup, 6> kAllGroups = {
    ParamGroup::kEmbeddings, ParamGroup::kEncoder, ParamGroup::kDecoder,
    ParamGroup::kPointer,    ParamGroup::kOutput,  ParamGroup::kAlignment};

std::string_view group_name(ParamGroup group);
// Throws std::invalid_argument for an unknown name.
ParamGroup parse_group(std::string_view name);
// Parses "decoder,pointer,output"; "all" and "none" are accepted.
std::vector<ParamGroup> parse_group_list(std::string_view list);

struct Parameter {
  std::string name;
  ParamGroup group;
  Tensor value;
};

class ParamStore {
 public:
  ParamId add(std::string name, ParamGroup group, Tensor value);

  std::size_t size() const { return params_.size(); }
  Parameter& operator[](ParamId id) { return params_.at(id); }
  const Parameter& operator[](ParamId id) const { return params_.at(id); }
  std::span<const Parameter> all() const { return params_; }
  std::optional<ParamId> find(std::string_view name) const;

  Var bind(Tape& tape, ParamId id) const {
    return tape.parameter(id, params_.at(id).value);
  }

  // Mask over parameter ids: true where the parameter's group is not frozen.
  std::vector<bool> trainable_mask(std::span<const ParamGroup> frozen) const;

 private:
  std::vector<Parameter> params_;
};

// Uniform initialization in [-scale, scale].
Tensor uniform_tensor(Shape shape, double scale, std::mt19937_64& rng);

}  // namespace asas
