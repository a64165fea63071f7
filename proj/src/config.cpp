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

#include "asas/config.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

namespace asas {

using nlohmann::json;

void to_json(json& j, const TrainConfig& c) {
  j = json{{"batch_size", c.batch_size},
           {"epochs", c.epochs},
           {"patience", c.patience},
           {"lambda_qa", c.lambdas.qa},
           {"lambda_sum", c.lambdas.sum},
           {"lambda_cov", c.lambdas.cov},
           {"dropout", c.dropout},
           {"clip_norm", c.clip_norm},
           {"learning_rate", c.optimizer.learning_rate},
           {"initial_accumulator", c.optimizer.initial_accumulator},
           {"epsilon", c.optimizer.epsilon},
           {"max_summary_len", c.max_summary_len},
           {"negatives_per_question", c.negatives_per_question},
           {"teacher_force", c.teacher_force}};
}

void from_json(const json& j, TrainConfig& c) {
  c.batch_size = j.value("batch_size", c.batch_size);
  c.epochs = j.value("epochs", c.epochs);
  c.patience = j.value("patience", c.patience);
  c.lambdas.qa = j.value("lambda_qa", c.lambdas.qa);
  c.lambdas.sum = j.value("lambda_sum", c.lambdas.sum);
  c.lambdas.cov = j.value("lambda_cov", c.lambdas.cov);
  c.dropout = j.value("dropout", c.dropout);
  c.clip_norm = j.value("clip_norm", c.clip_norm);
  c.optimizer.learning_rate = j.value("learning_rate", c.optimizer.learning_rate);
  c.optimizer.initial_accumulator =
      j.value("initial_accumulator", c.optimizer.initial_accumulator);
  c.optimizer.epsilon = j.value("epsilon", c.optimizer.epsilon);
  c.max_summary_len = j.value("max_summary_len", c.max_summary_len);
  c.negatives_per_question = j.value("negatives_per_question", c.negatives_per_question);
  c.teacher_force = j.value("teacher_force", c.teacher_force);
  if (c.batch_size == 0) throw std::invalid_argument("train.batch_size must be positive");
  if (c.dropout < 0.0 || c.dropout >= 1.0) {
    throw std::invalid_argument("train.dropout must be in [0, 1)");
  }
}

void to_json(json& j, const PathsConfig& c) {
  j = json{{"train", c.train},         {"dev", c.dev},
           {"test", c.test},           {"embeddings", c.embeddings},
           {"vocab", c.vocab},         {"checkpoint_dir", c.checkpoint_dir},
           {"output_dir", c.output_dir}};
}

void from_json(const json& j, PathsConfig& c) {
  c.train = j.value("train", c.train);
  c.dev = j.value("dev", c.dev);
  c.test = j.value("test", c.test);
  c.embeddings = j.value("embeddings", c.embeddings);
  c.vocab = j.value("vocab", c.vocab);
  c.checkpoint_dir = j.value("checkpoint_dir", c.checkpoint_dir);
  c.output_dir = j.value("output_dir", c.output_dir);
}

void to_json(json& j, const RunConfig& c) {
  j = json{{"paths", c.paths},
           {"model", c.model},
           {"train", c.train},
           {"truncation",
            {{"answer", c.truncation.answer},
             {"summary", c.truncation.summary},
             {"question", c.truncation.question}}},
           {"vocab_size", c.vocab_size},
           {"beam_size", c.beam_size},
           {"seed", c.seed}};
}

void from_json(const json& j, RunConfig& c) {
  static const std::set<std::string> known = {"paths", "model", "train", "truncation",
                                              "vocab_size", "beam_size", "seed"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw std::invalid_argument("unknown config field '" + key + "'");
  }
  if (j.contains("paths")) j.at("paths").get_to(c.paths);
  if (j.contains("model")) j.at("model").get_to(c.model);
  if (j.contains("train")) j.at("train").get_to(c.train);
  if (j.contains("truncation")) {
    const json& t = j.at("truncation");
    c.truncation.answer = t.value("answer", c.truncation.answer);
    c.truncation.summary = t.value("summary", c.truncation.summary);
    c.truncation.question = t.value("question", c.truncation.question);
  }
  c.vocab_size = j.value("vocab_size", c.vocab_size);
  c.beam_size = j.value("beam_size", c.beam_size);
  c.seed = j.value("seed", c.seed);
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  from_json(j, c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const RunConfig& config) {
  const std::string canonical = json(config).dump();
  const uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(canonical.data()),
                          static_cast<uInt>(canonical.size()));
  char buf[9];
  std::snprintf(buf, sizeof(buf), "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

}  // namespace asas
