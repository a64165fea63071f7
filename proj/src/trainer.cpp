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

#include "asas/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>

#include "asas/rng.hpp"

namespace asas {

using nlohmann::json;

TrainingState TrainingState::fresh(const ModelDims& dims, std::uint64_t seed,
                                   const AdagradConfig& optimizer) {
  TrainingState s;
  s.model = Model(dims, seed);
  s.optimizer = Adagrad(s.model.store, optimizer);
  s.seed = seed;
  return s;
}

TrainingState TrainingState::from_model(const Model& source, std::uint64_t seed,
                                        const AdagradConfig& optimizer) {
  TrainingState s;
  s.model = source;
  s.optimizer = Adagrad(s.model.store, optimizer);
  s.seed = seed;
  return s;
}

std::vector<PairRef> epoch_pairs(std::span<const EncodedQuestion> data, const TrainConfig& cfg,
                                 std::uint64_t seed, std::size_t epoch) {
  auto rng = substream(seed, "shuffle", epoch);
  std::vector<PairRef> pairs;
  for (std::size_t q = 0; q < data.size(); ++q) {
    std::vector<std::size_t> negatives;
    for (std::size_t c = 0; c < data[q].candidates.size(); ++c) {
      if (data[q].candidates[c].label == 1) {
        pairs.push_back({q, c});
      } else {
        negatives.push_back(c);
      }
    }
    if (cfg.negatives_per_question > 0 && negatives.size() > cfg.negatives_per_question) {
      std::shuffle(negatives.begin(), negatives.end(), rng);
      negatives.resize(cfg.negatives_per_question);
      std::sort(negatives.begin(), negatives.end());
    }
    for (std::size_t c : negatives) pairs.push_back({q, c});
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  return pairs;
}

namespace {

bool carries_summary(const EncodedCandidate& c, const TrainConfig& cfg) {
  return cfg.teacher_force && c.label == 1 && c.summary_inputs.has_value();
}

std::string batch_ids(std::span<const EncodedQuestion> data, std::span<const PairRef> batch) {
  std::string out;
  for (const PairRef& p : batch) {
    if (!out.empty()) out += ", ";
    out += data[p.question].question_id + "/" + data[p.question].candidates[p.candidate].answer_id;
  }
  return out;
}

// Shared by training (with gradients) and loss evaluation (without).
BatchGradients run_batch(const Model& model, std::span<const EncodedQuestion> data,
                         std::span<const PairRef> batch, const TrainConfig& cfg, double dropout,
                         std::uint64_t seed, std::size_t step, bool want_grads) {
  const std::size_t n = batch.size();
  std::size_t n_summaries = 0;
  for (const PairRef& p : batch) {
    if (carries_summary(data[p.question].candidates[p.candidate], cfg)) ++n_summaries;
  }

  BatchGradients out;
  out.grads = Gradients(model.store.size());
  double qa = 0.0, sum = 0.0, cov = 0.0;
  std::exception_ptr error;

#pragma omp parallel for ordered schedule(static, 1)
  for (std::size_t i = 0; i < n; ++i) {
    const EncodedQuestion& q = data[batch[i].question];
    const EncodedCandidate& cand = q.candidates[batch[i].candidate];
    Gradients g;
    double l_qa = 0.0, l_sum = 0.0, l_cov = 0.0;
    std::size_t tokens = 0;
    std::exception_ptr local;
    try {
      Tape tape;
      ForwardOptions opt;
      opt.dropout = dropout;
      opt.dropout_seed = substream(seed, "dropout", (std::uint64_t{step} << 20) | i)();
      opt.max_summary_len = cfg.max_summary_len;
      opt.teacher_force = cfg.teacher_force;
      const PairForward f = forward_pair(tape, model, q.question_ids, cand, opt);
      l_qa = f.qa_loss.value().item();
      if (f.sum_loss) {
        l_sum = f.sum_loss->value().item();
        l_cov = f.cov_loss->value().item();
        tokens = f.trace.steps.size();
      }
      if (want_grads) {
        tape.backward(pair_objective(f, cfg.lambdas, n, n_summaries));
        g = tape.gradients(model.store.size());
      }
    } catch (...) {
      local = std::current_exception();
    }
#pragma omp ordered
    {
      if (local && !error) error = local;
      if (!error) {
        if (want_grads) out.grads.add(g);
        qa += l_qa;
        sum += l_sum;
        cov += l_cov;
        out.losses.summary_tokens += tokens;
      }
    }
  }

  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const NumericError& e) {
      throw TrainingError(std::string("non-finite value at step ") + std::to_string(step) +
                          " (batch " + batch_ids(data, batch) + "): " + e.what());
    }
  }
  out.losses.qa_pairs = n;
  out.losses.summary_pairs = n_summaries;
  out.losses.qa = n > 0 ? qa / static_cast<double>(n) : 0.0;
  out.losses.sum = n_summaries > 0 ? sum / static_cast<double>(n_summaries) : 0.0;
  out.losses.cov = n_summaries > 0 ? cov / static_cast<double>(n_summaries) : 0.0;
  out.losses.compose(cfg.lambdas);
  return out;
}

std::vector<PairRef> all_pairs(std::span<const EncodedQuestion> data) {
  std::vector<PairRef> pairs;
  for (std::size_t q = 0; q < data.size(); ++q) {
    for (std::size_t c = 0; c < data[q].candidates.size(); ++c) pairs.push_back({q, c});
  }
  return pairs;
}

// Pair-weighted running mean of batch losses.
struct LossMeans {
  double qa = 0.0, sum = 0.0, cov = 0.0;
  std::size_t pairs = 0, summaries = 0, tokens = 0;

  void add(const LossBreakdown& l) {
    qa += l.qa * static_cast<double>(l.qa_pairs);
    sum += l.sum * static_cast<double>(l.summary_pairs);
    cov += l.cov * static_cast<double>(l.summary_pairs);
    pairs += l.qa_pairs;
    summaries += l.summary_pairs;
    tokens += l.summary_tokens;
  }

  LossBreakdown mean(const LossWeights& w) const {
    LossBreakdown l;
    l.qa_pairs = pairs;
    l.summary_pairs = summaries;
    l.summary_tokens = tokens;
    l.qa = pairs ? qa / static_cast<double>(pairs) : 0.0;
    l.sum = summaries ? sum / static_cast<double>(summaries) : 0.0;
    l.cov = summaries ? cov / static_cast<double>(summaries) : 0.0;
    l.compose(w);
    return l;
  }
};

}  // namespace

BatchGradients batch_gradients(const Model& model, std::span<const EncodedQuestion> data,
                               std::span<const PairRef> batch, const TrainConfig& cfg,
                               std::uint64_t seed, std::size_t step) {
  return run_batch(model, data, batch, cfg, cfg.dropout, seed, step, true);
}

LossBreakdown train_step(TrainingState& state, std::span<const EncodedQuestion> data,
                         std::span<const PairRef> batch, const TrainConfig& cfg,
                         std::span<const bool> trainable) {
  if (batch.empty()) throw TrainingError("empty batch");
  BatchGradients bg = batch_gradients(state.model, data, batch, cfg, state.seed, state.step);
  if (!std::isfinite(bg.losses.total)) {
    throw TrainingError("non-finite loss at step " + std::to_string(state.step) + " (batch " +
                        batch_ids(data, batch) + ")");
  }
  const double norm = clip_global_norm(bg.grads, cfg.clip_norm, trainable);
  if (!std::isfinite(norm)) {
    throw TrainingError("non-finite gradient norm at step " + std::to_string(state.step) +
                        " (batch " + batch_ids(data, batch) + ")");
  }
  state.optimizer.step(state.model.store, bg.grads, trainable);
  ++state.step;
  return bg.losses;
}

LossBreakdown evaluate_loss(const Model& model, std::span<const EncodedQuestion> data,
                            const TrainConfig& cfg) {
  const std::vector<PairRef> pairs = all_pairs(data);
  if (pairs.empty()) return {};
  // Normalized over the whole set, as if it were one batch.
  return run_batch(model, data, pairs, cfg, 0.0, 0, 0, false).losses;
}

std::vector<RankedList> rank_questions(const Model& model, std::span<const EncodedQuestion> data,
                                       std::size_t max_summary_len) {
  const std::vector<PairRef> pairs = all_pairs(data);
  std::vector<double> scores(pairs.size(), 0.0);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      const EncodedQuestion& q = data[pairs[i].question];
      scores[i] = score_candidate(model, q.question_ids, q.candidates[pairs[i].candidate],
                                  max_summary_len);
    } catch (...) {
#pragma omp critical(asas_rank_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  std::vector<RankedList> lists;
  std::size_t k = 0;
  for (const EncodedQuestion& q : data) {
    std::vector<RankedCandidate> cands;
    for (const EncodedCandidate& c : q.candidates) {
      cands.push_back({c.answer_id, scores[k++], c.label, c.answer_length});
    }
    if (!cands.empty()) lists.emplace_back(q.question_id, std::move(cands));
  }
  return lists;
}

json to_json(const EpochRecord& r) {
  json j{{"epoch", r.epoch},         {"steps", r.steps},
         {"L_qa", r.losses.qa},      {"L_sum", r.losses.sum},
         {"L_cov", r.losses.cov},    {"L_total", r.losses.total},
         {"improved", r.improved}};
  if (r.dev) {
    j["dev_map"] = r.dev->map;
    j["dev_mrr"] = r.dev->mrr;
    j["dev_p_at_1"] = r.dev->p_at_1;
  } else {
    j["dev_map"] = nullptr;
    j["dev_mrr"] = nullptr;
  }
  return j;
}

TrainResult train(TrainingState& state, std::span<const EncodedQuestion> train_data,
                  std::span<const EncodedQuestion> dev_data, const TrainConfig& cfg,
                  std::span<const ParamGroup> frozen, const TrainHooks& hooks) {
  if (all_pairs(train_data).empty()) throw TrainingError("empty training set");
  const std::vector<bool> mask =
      frozen.empty() ? std::vector<bool>{} : state.model.store.trainable_mask(frozen);
  // std::vector<bool> has no contiguous storage.
  const std::unique_ptr<bool[]> mask_data(new bool[mask.size()]);
  std::copy(mask.begin(), mask.end(), mask_data.get());
  const std::span<const bool> trainable(mask_data.get(), mask.size());

  TrainResult result;
  result.best = state.model;
  result.best_epoch = state.best_epoch;
  while (state.epoch < cfg.epochs) {
    if (state.best_dev_map >= 0.0 && state.stale_epochs >= cfg.patience) {
      result.early_stopped = true;
      break;
    }
    EpochRecord rec;
    rec.epoch = state.epoch + 1;
    const std::vector<PairRef> pairs = epoch_pairs(train_data, cfg, state.seed, rec.epoch);
    LossMeans means;
    for (std::size_t b = 0; b < pairs.size(); b += cfg.batch_size) {
      const std::size_t e = std::min(pairs.size(), b + cfg.batch_size);
      means.add(train_step(state, train_data, std::span(pairs).subspan(b, e - b), cfg, trainable));
      ++rec.steps;
    }
    rec.losses = means.mean(cfg.lambdas);
    state.epoch = rec.epoch;

    if (!dev_data.empty()) {
      rec.dev = rank_metrics(rank_questions(state.model, dev_data, cfg.max_summary_len));
      rec.improved = rec.dev->map > state.best_dev_map;
    } else {
      rec.improved = true;
    }
    if (rec.improved) {
      if (rec.dev) state.best_dev_map = rec.dev->map;
      state.best_epoch = rec.epoch;
      state.stale_epochs = 0;
      result.best = state.model;
      result.best_epoch = rec.epoch;
    } else {
      ++state.stale_epochs;
    }
    result.log.push_back(rec);
    if (hooks.on_epoch) hooks.on_epoch(rec, state);
    if (rec.dev && state.stale_epochs >= cfg.patience && state.epoch < cfg.epochs) {
      result.early_stopped = true;
      break;
    }
  }
  return result;
}

TrainResult transfer_finetune(const Model& source, std::span<const EncodedQuestion> train_data,
                              std::span<const EncodedQuestion> dev_data, const TrainConfig& cfg,
                              std::span<const ParamGroup> frozen, std::uint64_t seed,
                              const TrainHooks& hooks) {
  TrainingState state = TrainingState::from_model(source, seed, cfg.optimizer);
  const std::vector<bool> mask = state.model.store.trainable_mask(frozen);
  if (std::find(mask.begin(), mask.end(), true) != mask.end()) {
    return train(state, train_data, dev_data, cfg, frozen, hooks);
  }
  // Everything frozen: zero-shot evaluation of the source parameters.
  TrainResult result;
  result.best = state.model;
  EpochRecord rec;
  rec.improved = true;
  if (!dev_data.empty()) {
    rec.dev = rank_metrics(rank_questions(state.model, dev_data, cfg.max_summary_len));
    state.best_dev_map = rec.dev->map;
  }
  result.log.push_back(rec);
  if (hooks.on_epoch) hooks.on_epoch(rec, state);
  return result;
}

}  // namespace asas
