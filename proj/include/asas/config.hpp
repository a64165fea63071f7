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

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "asas/corpus.hpp"
#include "asas/losses.hpp"
#include "asas/model.hpp"
#include "asas/numerics.hpp"

namespace asas {

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t epochs = 5;    // hard cap
  std::size_t patience = 1;  // epochs without dev MAP improvement before stopping
  LossWeights lambdas;
  double dropout = 0.5;
  double clip_norm = 2.0;
  AdagradConfig optimizer;
  std::size_t max_summary_len = 100;
  // Negatives kept per question and epoch; 0 keeps all.
  std::size_t negatives_per_question = 0;
  bool teacher_force = true;
};

struct PathsConfig {
  std::string train;
  std::string dev;
  std::string test;
  std::string embeddings;
  std::string vocab;
  std::string checkpoint_dir = "checkpoints";
  std::string output_dir = "out";
};

struct RunConfig {
  PathsConfig paths;
  ModelDims model;
  TrainConfig train;
  TruncationLimits truncation;
  std::size_t vocab_size = 50000;
  std::size_t beam_size = 4;
  std::uint64_t seed = 1;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);
void to_json(nlohmann::json& j, const PathsConfig& c);
void from_json(const nlohmann::json& j, PathsConfig& c);
void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

// Missing fields keep their defaults; unknown top-level keys are rejected.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const nlohmann::json& j);

// Hex CRC-32 of the canonical JSON serialization.
std::string config_hash(const RunConfig& config);

}  // namespace asas
