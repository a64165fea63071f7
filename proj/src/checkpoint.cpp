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

#include "asas/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace asas {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'A', 'S', 'A', 'S', 'C', 'K', 'P', 'T'};

template <typename T>
void put_le(std::string& out, T v) {
  static_assert(std::is_integral_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
  }
}

template <typename T>
T get_le(const std::string& in, std::size_t at) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  }
  return static_cast<T>(v);
}

void put_tensor(std::string& payload, const Tensor& t) {
  for (double d : t.values()) put_le(payload, std::bit_cast<std::uint64_t>(d));
}

json tensor_entry(const Tensor& t, std::size_t offset) {
  return json{{"shape", t.shape()},
              {"dtype", "f64le"},
              {"offset", offset},
              {"length", t.size() * sizeof(double)}};
}

std::uint32_t crc_of(const std::string& bytes, std::size_t n) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(n)));
}

// Reads the tensor described by `entry` into `dst`, which fixes the shape.
void read_tensor(const std::string& name, const json& entry, const std::string& payload,
                 Tensor& dst) {
  if (entry.at("dtype").get<std::string>() != "f64le") {
    throw CheckpointError("tensor '" + name + "' has unsupported dtype");
  }
  const Shape stored = entry.at("shape").get<Shape>();
  if (stored != dst.shape()) {
    throw CheckpointError("shape mismatch for tensor '" + name + "': checkpoint has " +
                          shape_string(stored) + ", model expects " + shape_string(dst.shape()));
  }
  const std::size_t offset = entry.at("offset").get<std::size_t>();
  const std::size_t length = entry.at("length").get<std::size_t>();
  if (length != dst.size() * sizeof(double) || offset + length > payload.size()) {
    throw CheckpointError("tensor '" + name + "' lies outside the payload");
  }
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = std::bit_cast<double>(get_le<std::uint64_t>(payload, offset + 8 * i));
  }
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  const TrainingState& s = ckpt.state;
  const ParamStore& store = s.model.store;
  std::string payload;
  json groups = json::object();
  for (const Parameter& p : store.all()) {
    groups[std::string(group_name(p.group))][p.name] = tensor_entry(p.value, payload.size());
    put_tensor(payload, p.value);
  }
  json accumulators = json::object();
  const auto& acc = s.optimizer.accumulators();
  for (std::size_t i = 0; i < acc.size() && i < store.size(); ++i) {
    accumulators[store[i].name] = tensor_entry(acc[i], payload.size());
    put_tensor(payload, acc[i]);
  }
  const AdagradConfig& opt = s.optimizer.config();
  const json manifest{
      {"config", ckpt.config},
      {"config_hash", ckpt.config_hash},
      {"seed", s.seed},
      // Shuffle and dropout streams are derived from (seed, epoch, step).
      {"rng_state", {{"seed", s.seed}, {"epoch", s.epoch}, {"step", s.step}}},
      {"epoch", s.epoch},
      {"step", s.step},
      {"best_dev_map", s.best_dev_map},
      {"best_epoch", s.best_epoch},
      {"stale_epochs", s.stale_epochs},
      {"dims", s.model.dims},
      {"vocab", ckpt.vocab.to_json()},
      {"optimizer",
       {{"learning_rate", opt.learning_rate},
        {"initial_accumulator", opt.initial_accumulator},
        {"epsilon", opt.epsilon}}},
      {"groups", groups},
      {"accumulators", accumulators}};
  const std::string mtext = manifest.dump();

  std::string bytes(kMagic, sizeof(kMagic));
  put_le(bytes, kCheckpointVersion);
  put_le(bytes, static_cast<std::uint64_t>(mtext.size()));
  bytes += mtext;
  bytes += payload;
  put_le(bytes, crc_of(bytes, bytes.size()));

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CheckpointError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<ModelDims>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read checkpoint " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  constexpr std::size_t header = sizeof(kMagic) + 4 + 8;
  if (bytes.size() < header + 4 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError(path.string() + " is not a checkpoint");
  }
  const auto version = get_le<std::uint32_t>(bytes, sizeof(kMagic));
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version) +
                          " (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  const std::size_t body = bytes.size() - 4;
  if (crc_of(bytes, body) != get_le<std::uint32_t>(bytes, body)) {
    throw CheckpointError("checksum mismatch in " + path.string());
  }
  const auto mlen = get_le<std::uint64_t>(bytes, sizeof(kMagic) + 4);
  if (header + mlen > body) throw CheckpointError("truncated manifest in " + path.string());

  json manifest;
  try {
    manifest = json::parse(bytes.substr(header, mlen));
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("bad manifest: ") + e.what());
  }
  const std::string payload = bytes.substr(header + mlen, body - header - mlen);

  Checkpoint ckpt;
  try {
    ckpt.config = manifest.at("config");
    ckpt.config_hash = manifest.at("config_hash").get<std::string>();
    ckpt.vocab = Vocabulary::from_json(manifest.at("vocab"));
    const ModelDims stored = manifest.at("dims").get<ModelDims>();
    const ModelDims dims = expected.value_or(stored);

    TrainingState& s = ckpt.state;
    s.seed = manifest.at("seed").get<std::uint64_t>();
    s.epoch = manifest.at("epoch").get<std::size_t>();
    s.step = manifest.at("step").get<std::size_t>();
    s.best_dev_map = manifest.at("best_dev_map").get<double>();
    s.best_epoch = manifest.at("best_epoch").get<std::size_t>();
    s.stale_epochs = manifest.at("stale_epochs").get<std::size_t>();
    s.model = Model(dims, s.seed);

    const json& groups = manifest.at("groups");
    for (ParamId id = 0; id < s.model.store.size(); ++id) {
      Parameter& p = s.model.store[id];
      const std::string g(group_name(p.group));
      if (!groups.contains(g) || !groups.at(g).contains(p.name)) {
        throw CheckpointError("tensor '" + p.name + "' missing from checkpoint");
      }
      read_tensor(p.name, groups.at(g).at(p.name), payload, p.value);
    }

    const json& o = manifest.at("optimizer");
    AdagradConfig opt;
    opt.learning_rate = o.at("learning_rate").get<double>();
    opt.initial_accumulator = o.at("initial_accumulator").get<double>();
    opt.epsilon = o.at("epsilon").get<double>();
    s.optimizer = Adagrad(s.model.store, opt);
    const json& acc = manifest.at("accumulators");
    auto& dst = s.optimizer.accumulators();
    for (ParamId id = 0; id < dst.size(); ++id) {
      const std::string& name = s.model.store[id].name;
      if (!acc.contains(name)) throw CheckpointError("accumulator '" + name + "' missing");
      read_tensor(name, acc.at(name), payload, dst[id]);
    }
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("bad manifest: ") + e.what());
  }
  return ckpt;
}

void copy_parameters(Model& target, const Model& source) {
  for (ParamId id = 0; id < target.store.size(); ++id) {
    Parameter& p = target.store[id];
    const auto src = source.store.find(p.name);
    if (!src) throw CheckpointError("tensor '" + p.name + "' missing from source model");
    const Tensor& v = source.store[*src].value;
    if (v.shape() != p.value.shape()) {
      throw CheckpointError("shape mismatch for tensor '" + p.name + "': source has " +
                            shape_string(v.shape()) + ", model expects " +
                            shape_string(p.value.shape()));
    }
    p.value = v;
  }
}

}  // namespace asas
