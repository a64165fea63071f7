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

#include "asas/cli.hpp"

#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "asas/checkpoint.hpp"
#include "asas/config.hpp"
#include "asas/corpus.hpp"
#include "asas/metrics.hpp"
#include "asas/rng.hpp"
#include "asas/synthetic.hpp"
#include "asas/trainer.hpp"

namespace asas::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Flags shared by every command; unset optionals leave the config alone.
struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs, batch_size, patience, hidden, embedding_dim, attention_dim,
      vocab_size, beam, max_summary_len, negatives;
  std::optional<double> lr, dropout, clip_norm;
  std::optional<std::string> train, dev, test, embeddings, vocab, checkpoint_dir, output_dir;

  // Command-specific.
  std::string data, out, report, checkpoint, scores, predictions, freeze = "decoder,pointer,output";
  std::string domain = "A";
  bool relevant_only = false, hard_negatives = false, unseen_pairs = false;
  std::size_t synth_train = 50, synth_dev = 20, synth_test = 20, synth_candidates = 4;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run config (falls back to $ASAS_CONFIG)");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--epochs", f.epochs, "Epoch cap");
  cmd->add_option("--batch-size", f.batch_size, "QA pairs per batch");
  cmd->add_option("--patience", f.patience, "Epochs without dev MAP gain before stopping");
  cmd->add_option("--hidden", f.hidden, "Hidden size");
  cmd->add_option("--embedding-dim", f.embedding_dim, "Embedding size");
  cmd->add_option("--attention-dim", f.attention_dim, "Attention size");
  cmd->add_option("--vocab-size", f.vocab_size, "Vocabulary cap including specials");
  cmd->add_option("--beam", f.beam, "Beam width");
  cmd->add_option("--max-summary-len", f.max_summary_len, "Decode length cap");
  cmd->add_option("--negatives", f.negatives, "Negatives kept per question (0 = all)");
  cmd->add_option("--lr", f.lr, "Adagrad learning rate");
  cmd->add_option("--dropout", f.dropout, "Dropout rate");
  cmd->add_option("--clip-norm", f.clip_norm, "Global gradient norm cap");
  cmd->add_option("--train", f.train, "Training split");
  cmd->add_option("--dev", f.dev, "Dev split");
  cmd->add_option("--test", f.test, "Test split");
  cmd->add_option("--embeddings", f.embeddings, "Pre-trained embeddings (text)");
  cmd->add_option("--vocab", f.vocab, "Vocabulary file");
  cmd->add_option("--checkpoint-dir", f.checkpoint_dir, "Checkpoint directory");
  cmd->add_option("--output-dir", f.output_dir, "Output directory");
}

RunConfig resolve_config(const Flags& f) {
  RunConfig c;
  std::string path = f.config;
  if (path.empty()) {
    if (const char* env = std::getenv("ASAS_CONFIG"); env && *env) path = env;
  }
  if (!path.empty()) c = load_config(path);
  auto set = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  set(c.seed, f.seed);
  set(c.train.epochs, f.epochs);
  set(c.train.batch_size, f.batch_size);
  set(c.train.patience, f.patience);
  set(c.model.hidden_dim, f.hidden);
  set(c.model.embedding_dim, f.embedding_dim);
  set(c.model.attention_dim, f.attention_dim);
  set(c.vocab_size, f.vocab_size);
  set(c.beam_size, f.beam);
  set(c.train.max_summary_len, f.max_summary_len);
  set(c.train.negatives_per_question, f.negatives);
  set(c.train.optimizer.learning_rate, f.lr);
  set(c.train.dropout, f.dropout);
  set(c.train.clip_norm, f.clip_norm);
  set(c.paths.train, f.train);
  set(c.paths.dev, f.dev);
  set(c.paths.test, f.test);
  set(c.paths.embeddings, f.embeddings);
  set(c.paths.vocab, f.vocab);
  set(c.paths.checkpoint_dir, f.checkpoint_dir);
  set(c.paths.output_dir, f.output_dir);
  // Re-validate through the JSON schema.
  return config_from_json(json(c));
}

// Output paths must not alias an input.
class Writer {
 public:
  void input(const std::string& p) {
    if (!p.empty()) inputs_.push_back(fs::weakly_canonical(p));
  }

  void write(const fs::path& path, const std::string& content) const {
    const fs::path canon = fs::weakly_canonical(path);
    for (const fs::path& in : inputs_) {
      if (in == canon) throw UsageError("refusing to overwrite input file " + path.string());
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      out << content;
      if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
  }

  void checkpoint(const fs::path& path, const Checkpoint& ckpt) const {
    const fs::path canon = fs::weakly_canonical(path);
    for (const fs::path& in : inputs_) {
      if (in == canon) throw UsageError("refusing to overwrite input file " + path.string());
    }
    save_checkpoint(path, ckpt);
  }

 private:
  std::vector<fs::path> inputs_;
};

json provenance(const std::string& hash, std::uint64_t seed) {
  return json{{"config_hash", hash}, {"seed", seed}};
}

std::string require(const std::string& value, const char* what) {
  if (value.empty()) throw UsageError(std::string("missing ") + what);
  return value;
}

std::vector<QAExample> load_split(const std::string& path, std::string_view split,
                                  const RunConfig& c) {
  return load_dataset(path, split, c.truncation);
}

Vocabulary read_vocab(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot read vocabulary " + path.string());
  try {
    return Vocabulary::from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw DatasetError("vocabulary " + path.string() + ": " + e.what());
  }
}

struct Loaded {
  Checkpoint ckpt;
  RunConfig config;
};

Loaded open_checkpoint(const std::string& path) {
  Loaded l;
  l.ckpt = load_checkpoint(require(path, "--checkpoint"));
  l.config = config_from_json(l.ckpt.config);
  return l;
}

// --- commands ----------------------------------------------------------------

json cmd_build_vocab(const Flags& f, const RunConfig& c, Writer& w) {
  const std::string data = f.data.empty() ? c.paths.train : f.data;
  w.input(require(data, "--data or paths.train"));
  const auto examples = load_split(data, "train", c);
  const Vocabulary vocab = Vocabulary::build(corpus_token_lists(examples), c.vocab_size);
  std::string out = f.out.empty() ? c.paths.vocab : f.out;
  if (out.empty()) out = (fs::path(c.paths.output_dir) / "vocab.json").string();
  json j = vocab.to_json();
  j.update(provenance(config_hash(c), c.seed));
  w.write(out, j.dump() + "\n");
  return json{{"vocab", out}, {"size", vocab.size()}};
}

Checkpoint make_checkpoint(const RunConfig& c, const Vocabulary& vocab, const TrainingState& s) {
  Checkpoint ckpt;
  ckpt.config = c;
  ckpt.config_hash = config_hash(c);
  ckpt.vocab = vocab;
  ckpt.state = s;
  return ckpt;
}

// Shared by train and transfer: per-epoch checkpoints, best.ckpt, metrics log.
TrainHooks epoch_writer(const RunConfig& c, const Vocabulary& vocab, const Writer& w,
                        std::string& metrics) {
  const fs::path dir = c.paths.checkpoint_dir;
  const std::string hash = config_hash(c);
  return TrainHooks{[&c, &vocab, &w, &metrics, dir, hash](const EpochRecord& rec,
                                                           const TrainingState& s) {
    const Checkpoint ckpt = make_checkpoint(c, vocab, s);
    w.checkpoint(dir / ("epoch_" + std::to_string(rec.epoch) + ".ckpt"), ckpt);
    if (rec.improved) w.checkpoint(dir / "best.ckpt", ckpt);
    json j = to_json(rec);
    j.update(provenance(hash, c.seed));
    metrics += j.dump() + "\n";
    w.write(fs::path(c.paths.output_dir) / "metrics.jsonl", metrics);
  }};
}

json summarize_result(const TrainResult& r, const RunConfig& c) {
  json log = json::array();
  for (const EpochRecord& e : r.log) log.push_back(to_json(e));
  return json{{"epochs", log},
              {"best_epoch", r.best_epoch},
              {"early_stopped", r.early_stopped},
              {"checkpoint_dir", c.paths.checkpoint_dir},
              {"metrics", (fs::path(c.paths.output_dir) / "metrics.jsonl").string()}};
}

json cmd_train(const Flags&, const RunConfig& c, Writer& w) {
  w.input(require(c.paths.train, "paths.train"));
  w.input(c.paths.dev);
  w.input(c.paths.vocab);
  w.input(c.paths.embeddings);
  const auto train_ex = load_split(c.paths.train, "train", c);
  const auto dev_ex =
      c.paths.dev.empty() ? std::vector<QAExample>{} : load_split(c.paths.dev, "dev", c);
  const Vocabulary vocab = !c.paths.vocab.empty() && fs::exists(c.paths.vocab)
                               ? read_vocab(c.paths.vocab)
                               : Vocabulary::build(corpus_token_lists(train_ex), c.vocab_size);
  ModelDims dims = c.model;
  dims.vocab_size = vocab.size();
  TrainingState state = TrainingState::fresh(dims, c.seed, c.train.optimizer);
  if (!c.paths.embeddings.empty()) {
    auto rng = substream(c.seed, "init", 1);
    state.model.set_embeddings(load_embeddings(c.paths.embeddings, vocab, rng).matrix);
  }
  const auto train_enc = encode_dataset(train_ex, vocab);
  const auto dev_enc = encode_dataset(dev_ex, vocab);
  std::string metrics;
  const TrainResult r = train(state, train_enc, dev_enc, c.train, {},
                              epoch_writer(c, vocab, w, metrics));
  return summarize_result(r, c);
}

json cmd_transfer(const Flags& f, const RunConfig& c, Writer& w) {
  w.input(f.checkpoint);
  w.input(require(c.paths.train, "paths.train"));
  w.input(c.paths.dev);
  Loaded src = open_checkpoint(f.checkpoint);
  const std::vector<ParamGroup> frozen = parse_group_list(f.freeze);
  const auto train_ex = load_split(c.paths.train, "train", c);
  const auto dev_ex =
      c.paths.dev.empty() ? std::vector<QAExample>{} : load_split(c.paths.dev, "dev", c);
  const Vocabulary& vocab = src.ckpt.vocab;
  const auto train_enc = encode_dataset(train_ex, vocab);
  const auto dev_enc = encode_dataset(dev_ex, vocab);
  // The architecture comes from the source; the run config must agree with it.
  RunConfig run = c;
  ModelDims want = c.model;
  want.vocab_size = vocab.size();
  if (!(want == src.ckpt.state.model.dims)) {
    Model probe(want, c.seed);
    copy_parameters(probe, src.ckpt.state.model);  // names the offending tensor
  }
  run.model = src.ckpt.state.model.dims;
  std::string metrics;
  const TrainResult r = transfer_finetune(src.ckpt.state.model, train_enc, dev_enc, run.train,
                                          frozen, run.seed, epoch_writer(run, vocab, w, metrics));
  json j = summarize_result(r, run);
  json groups = json::array();
  for (ParamGroup g : frozen) groups.push_back(std::string(group_name(g)));
  j["frozen"] = groups;
  return j;
}

json cmd_rank(const Flags& f, const RunConfig& c, Writer& w) {
  w.input(f.checkpoint);
  Loaded l = open_checkpoint(f.checkpoint);
  const std::string data = f.data.empty() ? c.paths.dev : f.data;
  w.input(require(data, "--data"));
  const auto examples = load_split(data, "dev", l.config);
  const auto enc = encode_dataset(examples, l.ckpt.vocab);
  const auto lists =
      rank_questions(l.ckpt.state.model, enc, l.config.train.max_summary_len);
  const json prov = provenance(l.ckpt.config_hash, l.ckpt.state.seed);

  std::string scores;
  for (const RankedList& list : lists) {
    json r = score_record(list);
    r.update(prov);
    scores += r.dump() + "\n";
  }
  const fs::path out_dir = c.paths.output_dir;
  const std::string scores_path = f.out.empty() ? (out_dir / "scores.jsonl").string() : f.out;
  const std::string report_path = f.report.empty() ? (out_dir / "rank_report.json").string()
                                                   : f.report;
  json report = prov;
  const bool labelled = std::any_of(lists.begin(), lists.end(),
                                    [](const RankedList& r) { return r.has_relevant(); });
  if (labelled) {
    const RankMetrics m = rank_metrics(lists);
    report.update(to_json(m));
    report["by_length"] = to_json(accuracy_by_length(lists));
  } else {
    report["map"] = report["mrr"] = report["p_at_1"] = nullptr;
    report["by_length"] = json::array();
  }
  w.write(scores_path, scores);
  w.write(report_path, report.dump(2) + "\n");
  report["scores"] = scores_path;
  report["report"] = report_path;
  return report;
}

json cmd_eval_rank(const Flags& f, const RunConfig& c, Writer& w) {
  w.input(require(f.scores, "--scores"));
  w.input(require(f.data, "--data"));
  const auto records = read_score_file(f.scores);
  const auto examples = load_split(f.data, "dev", c);
  const auto lists = attach_labels(records, examples);
  json report{{"by_length", to_json(accuracy_by_length(lists))}};
  report.update(to_json(rank_metrics(lists)));
  if (!f.report.empty()) w.write(f.report, report.dump(2) + "\n");
  return report;
}

json cmd_summarize(const Flags& f, const RunConfig& c, Writer& w) {
  w.input(f.checkpoint);
  Loaded l = open_checkpoint(f.checkpoint);
  const std::string data = f.data.empty() ? c.paths.test : f.data;
  w.input(require(data, "--data"));
  const auto examples = load_split(data, "test", l.config);
  const auto enc = encode_dataset(examples, l.ckpt.vocab);
  const std::size_t beam = f.beam ? *f.beam : l.config.beam_size;
  const std::size_t max_len = f.max_summary_len ? *f.max_summary_len
                                                : l.config.train.max_summary_len;

  struct Job {
    const EncodedQuestion* q;
    const EncodedCandidate* c;
  };
  std::vector<Job> jobs;
  for (const EncodedQuestion& q : enc) {
    for (const EncodedCandidate& cand : q.candidates) {
      if (!f.relevant_only || cand.label == 1) jobs.push_back({&q, &cand});
    }
  }
  std::vector<SummaryOutput> outputs(jobs.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      outputs[i] = beam_search_decode(l.ckpt.state.model, jobs[i].q->question_ids,
                                      jobs[i].c->answer, l.ckpt.vocab, beam, max_len);
    } catch (...) {
#pragma omp critical(asas_summarize_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  const json prov = provenance(l.ckpt.config_hash, l.ckpt.state.seed);
  std::string text;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::string joined;
    for (const std::string& t : outputs[i].tokens) joined += (joined.empty() ? "" : " ") + t;
    json r{{"question_id", jobs[i].q->question_id},
           {"answer_id", jobs[i].c->answer_id},
           {"summary", joined},
           {"tokens", outputs[i].tokens},
           {"p_gen", outputs[i].p_gen},
           {"score", outputs[i].score}};
    r.update(prov);
    text += r.dump() + "\n";
  }
  const std::string out =
      f.out.empty() ? (fs::path(c.paths.output_dir) / "summaries.jsonl").string() : f.out;
  w.write(out, text);
  return json{{"summaries", out}, {"count", jobs.size()}};
}

json cmd_eval_sum(const Flags& f, const RunConfig& c, Writer& w) {
  w.input(require(f.predictions, "--predictions"));
  w.input(require(f.data, "--data"));
  const auto examples = load_split(f.data, "test", c);
  std::map<std::pair<std::string, std::string>, const Tokens*> refs;
  for (const QAExample& ex : examples) {
    for (const Candidate& cand : ex.candidates) {
      if (cand.summary) refs[{ex.question_id, cand.answer_id}] = &*cand.summary;
    }
  }
  std::ifstream in(f.predictions);
  if (!in) throw DatasetError("cannot read " + f.predictions);
  std::vector<Tokens> cands, gold;
  json prov = json::object();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json r = json::parse(line);
      auto it = refs.find({r.at("question_id").get<std::string>(),
                           r.at("answer_id").get<std::string>()});
      if (it == refs.end()) continue;
      cands.push_back(r.contains("tokens") ? r.at("tokens").get<Tokens>()
                                           : tokenize(r.at("summary").get<std::string>()));
      gold.push_back(*it->second);
      if (prov.empty() && r.contains("config_hash")) {
        prov = provenance(r.at("config_hash").get<std::string>(), r.at("seed").get<std::uint64_t>());
      }
    } catch (const json::exception& e) {
      throw DatasetError(f.predictions + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  json report = to_json(rouge_report(cands, gold));
  report.update(prov);
  const std::string out =
      f.report.empty() ? (fs::path(c.paths.output_dir) / "rouge_report.json").string() : f.report;
  w.write(out, report.dump(2) + "\n");
  report["report"] = out;
  return report;
}

json cmd_synth(const Flags& f, const RunConfig& c, Writer& w) {
  SyntheticOptions o;
  if (f.domain == "A" || f.domain == "a") {
    o.domain = SyntheticDomain::kA;
  } else if (f.domain == "B" || f.domain == "b") {
    o.domain = SyntheticDomain::kB;
  } else {
    throw UsageError("unknown synthetic domain '" + f.domain + "' (expected A or B)");
  }
  o.train_questions = f.synth_train;
  o.dev_questions = f.synth_dev;
  o.test_questions = f.synth_test;
  o.candidates = f.synth_candidates;
  o.hard_negatives = f.hard_negatives;
  o.unseen_pairs = f.unseen_pairs;
  o.seed = c.seed;
  const SyntheticSplits s = make_synthetic(o);
  const fs::path dir = f.out.empty() ? fs::path(c.paths.output_dir) : fs::path(f.out);
  auto dump = [&](const std::vector<QAExample>& split, const char* name) {
    std::string text;
    for (const QAExample& ex : split) text += example_to_json(ex).dump() + "\n";
    w.write(dir / (std::string(name) + ".jsonl"), text);
  };
  dump(s.train, "train");
  dump(s.dev, "dev");
  dump(s.test, "test");
  return json{{"dir", dir.string()}, {"train", s.train.size()}, {"dev", s.dev.size()},
              {"test", s.test.size()}};
}

json error_record(const std::string& command, const char* kind, const std::string& message) {
  return json{{"status", "error"},
              {"command", command},
              {"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint answer selection and abstractive summarization"};
  app.require_subcommand(1);
  Flags f;

  struct Command {
    const char* name;
    const char* help;
    json (*fn)(const Flags&, const RunConfig&, Writer&);
  };
  const std::vector<Command> commands = {
      {"build-vocab", "Build the vocabulary from a training split", cmd_build_vocab},
      {"train", "Train the joint model", cmd_train},
      {"rank", "Score candidates and report ranking metrics", cmd_rank},
      {"summarize", "Beam-decode answer summaries", cmd_summarize},
      {"eval-sum", "ROUGE report for decoded summaries", cmd_eval_sum},
      {"eval-rank", "Ranking metrics for a score file", cmd_eval_rank},
      {"transfer", "Fine-tune a checkpoint with frozen groups", cmd_transfer},
      {"synth", "Write a templated toy corpus", cmd_synth},
  };
  std::map<CLI::App*, const Command*> by_app;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, f);
    by_app[sub] = &c;
  }
  auto sub = [&](const char* name) { return app.get_subcommand(name); };
  sub("build-vocab")->add_option("--data", f.data, "Training split");
  sub("build-vocab")->add_option("--out", f.out, "Vocabulary output");
  for (const char* n : {"rank", "summarize", "transfer"}) {
    sub(n)->add_option("--checkpoint", f.checkpoint, "Checkpoint to load")->required();
  }
  for (const char* n : {"rank", "summarize", "eval-sum", "eval-rank"}) {
    sub(n)->add_option("--data", f.data, "Dataset split");
  }
  sub("rank")->add_option("--out", f.out, "Scores JSONL");
  sub("rank")->add_option("--report", f.report, "Metrics report JSON");
  sub("summarize")->add_option("--out", f.out, "Summaries JSONL");
  sub("summarize")->add_flag("--relevant-only", f.relevant_only, "Only label-1 candidates");
  sub("eval-sum")->add_option("--predictions", f.predictions, "Summaries JSONL");
  sub("eval-sum")->add_option("--report", f.report, "ROUGE report JSON");
  sub("eval-rank")->add_option("--scores", f.scores, "Scores JSONL");
  sub("eval-rank")->add_option("--report", f.report, "Metrics report JSON");
  sub("transfer")->add_option("--freeze", f.freeze,
                              "Frozen groups: comma list of embeddings, encoder, decoder, "
                              "pointer, output, alignment; or all / none");
  sub("synth")->add_option("--domain", f.domain, "A or B");
  sub("synth")->add_option("--out", f.out, "Output directory");
  sub("synth")->add_option("--questions", f.synth_train, "Training questions");
  sub("synth")->add_option("--dev-questions", f.synth_dev, "Dev questions");
  sub("synth")->add_option("--test-questions", f.synth_test, "Test questions");
  sub("synth")->add_option("--candidates", f.synth_candidates, "Candidates per question");
  sub("synth")->add_flag("--hard-negatives", f.hard_negatives,
                         "Negatives share the verb or noun");
  sub("synth")->add_flag("--unseen-pairs", f.unseen_pairs,
                         "Held-out questions use pairs absent from training");

  std::string command = argc > 1 ? argv[1] : "";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << error_record(command, "usage", e.what()).dump() << "\n";
    return kUsage;
  }

  const Command* cmd = nullptr;
  for (CLI::App* s : app.get_subcommands()) cmd = by_app.at(s);
  command = cmd->name;
  try {
    const RunConfig config = resolve_config(f);
    Writer w;
    json result = cmd->fn(f, config, w);
    out << json{{"status", "ok"}, {"command", command}, {"result", result}}.dump() << "\n";
    return kOk;
  } catch (const UsageError& e) {
    err << error_record(command, "usage", e.what()).dump() << "\n";
    return kUsage;
  } catch (const DatasetError& e) {
    err << error_record(command, "data", e.what()).dump() << "\n";
    return kData;
  } catch (const CheckpointError& e) {
    err << error_record(command, "checkpoint", e.what()).dump() << "\n";
    return kCheckpoint;
  } catch (const TrainingError& e) {
    err << error_record(command, "training", e.what()).dump() << "\n";
    return kTraining;
  } catch (const NumericError& e) {
    err << error_record(command, "numeric", e.what()).dump() << "\n";
    return kTraining;
  } catch (const std::invalid_argument& e) {
    err << error_record(command, "config", e.what()).dump() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << error_record(command, "config", e.what()).dump() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << error_record(command, "internal", e.what()).dump() << "\n";
    return kInternal;
  }
}

}  // namespace asas::cli
