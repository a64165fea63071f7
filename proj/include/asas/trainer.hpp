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

// Mini-batch joint training, dev-MAP early stopping and group-frozen
// fine-tuning.
//
// Per-pair gradients are computed in parallel, each on its own tape, and
// summed in batch order, so results do not depend on the thread count.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "asas/config.hpp"
#include "asas/joint.hpp"
#include "asas/metrics.hpp"
#include "asas/model.hpp"
#include "asas/numerics.hpp"

namespace asas {

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PairRef {
  std::size_t question = 0;
  std::size_t candidate = 0;
};

struct TrainingState {
  Model model;
  Adagrad optimizer;
  std::uint64_t seed = 1;
  std::size_t epoch = 0;  // completed epochs
  std::size_t step = 0;   // optimizer updates applied
  double best_dev_map = -1.0;
  std::size_t best_epoch = 0;
  std::size_t stale_epochs = 0;

  static TrainingState fresh(const ModelDims& dims, std::uint64_t seed,
                             const AdagradConfig& optimizer);
  // Warm start from `source`'s parameters with a fresh optimizer.
  static TrainingState from_model(const Model& source, std::uint64_t seed,
                                  const AdagradConfig& optimizer);
};

// Every (question, candidate) pair of the epoch in shuffled order. Negatives
// are subsampled per question when `negatives_per_question` > 0.
std::vector<PairRef> epoch_pairs(std::span<const EncodedQuestion> data, const TrainConfig& cfg,
                                 std::uint64_t seed, std::size_t epoch);

struct BatchGradients {
  Gradients grads;
  LossBreakdown losses;
};

// Joint objective of one batch and its gradients. `step` selects the dropout
// sub-streams.
BatchGradients batch_gradients(const Model& model, std::span<const EncodedQuestion> data,
                               std::span<const PairRef> batch, const TrainConfig& cfg,
                               std::uint64_t seed, std::size_t step);

// One clipped Adagrad update. Parameters outside `trainable` (when non-empty)
// are left untouched.
LossBreakdown train_step(TrainingState& state, std::span<const EncodedQuestion> data,
                         std::span<const PairRef> batch, const TrainConfig& cfg,
                         std::span<const bool> trainable = {});

// Dropout-free objective over the whole dataset, without updates.
LossBreakdown evaluate_loss(const Model& model, std::span<const EncodedQuestion> data,
                            const TrainConfig& cfg);

// P(relevant) for every candidate, regrouped per question.
std::vector<RankedList> rank_questions(const Model& model, std::span<const EncodedQuestion> data,
                                       std::size_t max_summary_len);

struct EpochRecord {
  std::size_t epoch = 0;
  std::size_t steps = 0;
  LossBreakdown losses;  // means over the epoch's batches
  std::optional<RankMetrics> dev;
  bool improved = false;
};

nlohmann::json to_json(const EpochRecord& r);

struct TrainHooks {
  std::function<void(const EpochRecord&, const TrainingState&)> on_epoch;
};

struct TrainResult {
  std::vector<EpochRecord> log;
  Model best;  // best dev MAP, or the last epoch without a dev set
  std::size_t best_epoch = 0;
  bool early_stopped = false;
};

// Runs epochs state.epoch+1 .. cfg.epochs, stopping after `patience` epochs
// without a dev MAP improvement. Throws TrainingError on an empty training set
// or a non-finite loss.
TrainResult train(TrainingState& state, std::span<const EncodedQuestion> train_data,
                  std::span<const EncodedQuestion> dev_data, const TrainConfig& cfg,
                  std::span<const ParamGroup> frozen = {}, const TrainHooks& hooks = {});

// Fine-tunes a copy of `source` on the target data with fresh optimizer
// state; frozen groups are never updated.
TrainResult transfer_finetune(const Model& source, std::span<const EncodedQuestion> train_data,
                              std::span<const EncodedQuestion> dev_data, const TrainConfig& cfg,
                              std::span<const ParamGroup> frozen, std::uint64_t seed,
                              const TrainHooks& hooks = {});

}  // namespace asas
