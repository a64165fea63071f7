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

#include <cmath>
#include <limits>

#include "asas/joint.hpp"
#include "asas/trainer.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace asas;
using namespace asas::testing;

namespace {

TrainConfig quiet_config() {
  TrainConfig cfg;
  cfg.batch_size = 4;
  cfg.dropout = 0.0;
  cfg.max_summary_len = 8;
  return cfg;
}

bool all_zero(const Gradients& g, ParamId id) {
  if (!g.has(id)) return true;
  for (double v : g.get(id).values()) {
    if (v != 0.0) return false;
  }
  return true;
}

bool any_nonzero_in_group(const Gradients& g, const Model& m, ParamGroup group) {
  for (ParamId id = 0; id < m.store.size(); ++id) {
    if (m.store[id].group == group && !all_zero(g, id)) return true;
  }
  return false;
}

bool same_group(const Model& a, const Model& b, ParamGroup group) {
  for (ParamId id = 0; id < a.store.size(); ++id) {
    if (a.store[id].group == group && !(a.store[id].value == b.store[id].value)) return false;
  }
  return true;
}

bool same_params(const Model& a, const Model& b) {
  for (ParamId id = 0; id < a.store.size(); ++id) {
    if (!(a.store[id].value == b.store[id].value)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("without summary losses the output layer gets no gradient") {
  const auto d = tiny_data(3, 3, 60);
  const Model m(tiny_dims(d.vocab.size()), 2);
  TrainConfig cfg = quiet_config();
  cfg.lambdas.sum = cfg.lambdas.cov = 0.0;
  const auto pairs = all_pairs(d.encoded);
  const auto bg = batch_gradients(m, d.encoded, pairs, cfg, 1, 0);
  CHECK(all_zero(bg.grads, m.output.w));
  CHECK(all_zero(bg.grads, m.output.b));
  CHECK(any_nonzero_in_group(bg.grads, m, ParamGroup::kEncoder));
  CHECK(any_nonzero_in_group(bg.grads, m, ParamGroup::kAlignment));
}

TEST_CASE("without the qa loss the alignment layer gets no gradient") {
  const auto d = tiny_data(3, 3, 60);
  const Model m(tiny_dims(d.vocab.size()), 2);
  TrainConfig cfg = quiet_config();
  cfg.lambdas.qa = 0.0;
  const auto bg = batch_gradients(m, d.encoded, all_pairs(d.encoded), cfg, 1, 0);
  CHECK_FALSE(any_nonzero_in_group(bg.grads, m, ParamGroup::kAlignment));
  CHECK(any_nonzero_in_group(bg.grads, m, ParamGroup::kOutput));
}

TEST_CASE("batch gradients agree with finite differences of the objective") {
  const auto d = tiny_data(1, 3, 20);
  const Model base(tiny_dims(d.vocab.size(), 8, 0.5), 7);
  TrainConfig cfg = quiet_config();
  cfg.max_summary_len = 4;
  const auto bg = batch_gradients(base, d.encoded, all_pairs(d.encoded), cfg, 1, 0);
  Model m = base;
  for (ParamId id = 0; id < m.store.size(); ++id) {
    Tensor& v = m.store[id].value;
    for (std::size_t i = 0; i < v.size(); i += 1 + v.size() / 6) {
      const double orig = v[i], h = 1e-5;
      v[i] = orig + h;
      const double up = evaluate_loss(m, d.encoded, cfg).total;
      v[i] = orig - h;
      const double down = evaluate_loss(m, d.encoded, cfg).total;
      v[i] = orig;
      const double fd = (up - down) / (2 * h);
      const double an = bg.grads.has(id) ? bg.grads.get(id)[i] : 0.0;
      INFO(m.store[id].name, "[", i, "]");
      CHECK(std::abs(fd - an) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("twenty steps lower the training loss for most seeds") {
  std::size_t decreased = 0;
  const std::size_t seeds = 10;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const auto d = tiny_data(8, 3, 80, seed);
    TrainConfig cfg = quiet_config();
    cfg.batch_size = 8;
    TrainingState st = TrainingState::fresh(tiny_dims(d.vocab.size()), seed, cfg.optimizer);
    const double before = evaluate_loss(st.model, d.encoded, cfg).total;
    std::size_t step = 0;
    for (std::size_t epoch = 1; step < 20; ++epoch) {
      const auto pairs = epoch_pairs(d.encoded, cfg, seed, epoch);
      for (std::size_t b = 0; b < pairs.size() && step < 20; b += cfg.batch_size, ++step) {
        const std::size_t e = std::min(pairs.size(), b + cfg.batch_size);
        train_step(st, d.encoded, std::span(pairs).subspan(b, e - b), cfg);
      }
    }
    if (evaluate_loss(st.model, d.encoded, cfg).total < before) ++decreased;
  }
  CHECK(static_cast<double>(decreased) >= 0.9 * seeds);
}

TEST_CASE("training rejects an empty set and reports non-finite batches") {
  const auto d = tiny_data(2, 2, 60);
  TrainConfig cfg = quiet_config();
  cfg.epochs = 1;
  TrainingState st = TrainingState::fresh(tiny_dims(d.vocab.size()), 1, cfg.optimizer);
  CHECK_THROWS_AS(train(st, std::span<const EncodedQuestion>{}, {}, cfg), TrainingError);

  st.model.store[st.model.embedding].value[4 * 8] = std::numeric_limits<double>::quiet_NaN();
  try {
    train(st, d.encoded, {}, cfg);
    FAIL("expected a training error");
  } catch (const TrainingError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("a-train-") != std::string::npos);
  }
}

TEST_CASE("identical seeds give identical parameters") {
  const auto d = tiny_data(4, 3, 60);
  TrainConfig cfg = quiet_config();
  cfg.epochs = 2;
  cfg.dropout = 0.3;
  TrainingState a = TrainingState::fresh(tiny_dims(d.vocab.size()), 9, cfg.optimizer);
  TrainingState b = TrainingState::fresh(tiny_dims(d.vocab.size()), 9, cfg.optimizer);
  train(a, d.encoded, {}, cfg);
  train(b, d.encoded, {}, cfg);
  CHECK(same_params(a.model, b.model));
  CHECK(a.optimizer.accumulators() == b.optimizer.accumulators());
  CHECK(a.step == b.step);
}

TEST_CASE("epoch pairs are a seeded permutation with optional negative sampling") {
  const auto d = tiny_data(5, 4, 60);
  TrainConfig cfg = quiet_config();
  const auto p1 = epoch_pairs(d.encoded, cfg, 3, 1), p1b = epoch_pairs(d.encoded, cfg, 3, 1),
             p2 = epoch_pairs(d.encoded, cfg, 3, 2);
  CHECK(p1.size() == 20);
  bool same = true, differ = false;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    same = same && p1[i].question == p1b[i].question && p1[i].candidate == p1b[i].candidate;
    differ = differ || p1[i].question != p2[i].question || p1[i].candidate != p2[i].candidate;
  }
  CHECK(same);
  CHECK(differ);
  cfg.negatives_per_question = 1;
  CHECK(epoch_pairs(d.encoded, cfg, 3, 1).size() == 10);
}

TEST_CASE("early stopping after the patience runs out") {
  const auto d = tiny_data(4, 3, 60);
  TrainConfig cfg = quiet_config();
  cfg.epochs = 30;
  cfg.patience = 1;
  cfg.optimizer.learning_rate = 0.0;  // dev MAP never improves after epoch 1
  TrainingState st = TrainingState::fresh(tiny_dims(d.vocab.size()), 1, cfg.optimizer);
  const TrainResult r = train(st, d.encoded, d.encoded, cfg);
  CHECK(r.early_stopped);
  CHECK(r.log.size() == 2);
  CHECK(r.log[0].improved);
  CHECK_FALSE(r.log[1].improved);
  CHECK(r.best_epoch == 1);
}

TEST_CASE("frozen groups stay byte-identical") {
  const auto d = tiny_data(4, 3, 60);
  TrainConfig cfg = quiet_config();
  cfg.epochs = 4;  // 3 steps per epoch with batch 4
  const Model source(tiny_dims(d.vocab.size()), 3);
  const std::vector<ParamGroup> frozen{ParamGroup::kDecoder, ParamGroup::kPointer,
                                       ParamGroup::kOutput};
  const TrainResult r = transfer_finetune(source, d.encoded, {}, cfg, frozen, 5);
  std::size_t steps = 0;
  for (const auto& rec : r.log) steps += rec.steps;
  CHECK(steps >= 10);
  for (ParamGroup g : frozen) CHECK(same_group(r.best, source, g));
  CHECK_FALSE(same_group(r.best, source, ParamGroup::kEncoder));
  CHECK_FALSE(same_group(r.best, source, ParamGroup::kAlignment));
}

TEST_CASE("freezing everything is zero-shot evaluation") {
  const auto d = tiny_data(4, 3, 60);
  TrainConfig cfg = quiet_config();
  const Model source(tiny_dims(d.vocab.size()), 3);
  const std::vector<ParamGroup> all(kAllGroups.begin(), kAllGroups.end());
  const TrainResult r = transfer_finetune(source, d.encoded, d.encoded, cfg, all, 5);
  CHECK(same_params(r.best, source));
  REQUIRE(r.log.size() == 1);
  const auto direct = rank_metrics(rank_questions(source, d.encoded, cfg.max_summary_len));
  CHECK(r.log[0].dev->map == direct.map);
  const auto& c = d.encoded[0].candidates[0];
  CHECK(score_candidate(r.best, d.encoded[0].question_ids, c, 8) ==
        score_candidate(source, d.encoded[0].question_ids, c, 8));
}

TEST_CASE("freezing nothing equals warm-start training") {
  const auto d = tiny_data(4, 3, 60);
  TrainConfig cfg = quiet_config();
  cfg.epochs = 2;
  const Model source(tiny_dims(d.vocab.size()), 3);
  const TrainResult r = transfer_finetune(source, d.encoded, {}, cfg, {}, 5);
  TrainingState warm = TrainingState::from_model(source, 5, cfg.optimizer);
  train(warm, d.encoded, {}, cfg);
  CHECK(same_params(r.best, warm.model));
}

TEST_CASE("epoch records serialize the loss breakdown") {
  EpochRecord rec;
  rec.epoch = 3;
  rec.steps = 7;
  rec.losses.qa = 0.5;
  rec.improved = true;
  const auto j = to_json(rec);
  CHECK(j.at("epoch") == 3);
  CHECK(j.at("L_qa") == 0.5);
  CHECK(j.at("dev_map").is_null());
}
