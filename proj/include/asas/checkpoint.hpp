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

// Checkpoint container.
//
//   "ASASCKPT" | u32 version | u64 manifest bytes | manifest JSON
//   | tensor payload (f64, little-endian) | u32 CRC-32 of all preceding bytes
//
// The manifest maps group -> tensor name -> {shape, dtype, offset, length}
// and carries the run config, its hash, the seed, progress counters, the
// vocabulary and the optimizer accumulators.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "asas/corpus.hpp"
#include "asas/trainer.hpp"

namespace asas {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  nlohmann::json config = nlohmann::json::object();
  std::string config_hash;
  Vocabulary vocab;
  TrainingState state;
};

// Writes through a temporary file and renames it into place.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);

// With `expected`, the model is built with those dims and every tensor must
// match its stored shape; otherwise the stored dims are used.
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<ModelDims>& expected = std::nullopt);

// Copies parameters by name. Throws CheckpointError naming the first tensor
// that is missing or has a different shape.
void copy_parameters(Model& target, const Model& source);

}  // namespace asas
