// Copyright 2026 The factgen Authors.
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

#include "factgen/checkpoint.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <vector>

#include "factgen/error.h"

namespace factgen {
namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'F', 'G', 'C', 'K', 'P', 'T', '0', '1'};

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little endian");

json hyperparams_to_json(const Hyperparams& hp) {
  return json{{"vocab_size", hp.vocab_size},       {"embed_dim", hp.embed_dim},
              {"hidden_dim", hp.hidden_dim},       {"layers", hp.layers},
              {"batch_size", hp.batch_size},       {"learning_rate", hp.learning_rate},
              {"max_decode_len", hp.max_decode_len}, {"ae_weight", hp.ae_weight},
              {"clip_norm", hp.clip_norm},         {"seed", hp.seed},
              {"backward_attention", hp.backward_attention}};
}

Hyperparams hyperparams_from_json(const json& j) {
  Hyperparams hp;
  hp.vocab_size = j.at("vocab_size").get<size_t>();
  hp.embed_dim = j.at("embed_dim").get<size_t>();
  hp.hidden_dim = j.at("hidden_dim").get<size_t>();
  hp.layers = j.at("layers").get<size_t>();
  hp.batch_size = j.at("batch_size").get<size_t>();
  hp.learning_rate = j.at("learning_rate").get<double>();
  hp.max_decode_len = j.at("max_decode_len").get<size_t>();
  hp.ae_weight = j.at("ae_weight").get<double>();
  hp.clip_norm = j.at("clip_norm").get<double>();
  hp.seed = j.at("seed").get<uint64_t>();
  hp.backward_attention = j.at("backward_attention").get<bool>();
  return hp;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  json header;
  header["hyperparams"] = hyperparams_to_json(checkpoint.hp);
  header["vocab_fingerprint"] = checkpoint.vocab_fingerprint;
  const TrainProgress& p = checkpoint.progress;
  header["progress"] = {{"step", p.step},
                        {"best_dev", std::isfinite(p.best_dev) ? json(p.best_dev) : json(nullptr)},
                        {"best_step", p.best_step},
                        {"stale_evals", p.stale_evals},
                        {"stopped_early", p.stopped_early}};
  header["metadata"] = checkpoint.metadata;
  json tensors = json::array();
  checkpoint.params.for_each(
      [&tensors](const std::string& name, std::span<const double>, size_t rows, size_t cols) {
        tensors.push_back({{"name", name}, {"rows", rows}, {"cols", cols}});
      });
  header["tensors"] = std::move(tensors);
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof(kMagic));
  const uint64_t length = text.size();
  out.write(reinterpret_cast<const char*>(&length), sizeof(length));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  checkpoint.params.for_each(
      [&out](const std::string&, std::span<const double> values, size_t, size_t) {
        out.write(reinterpret_cast<const char*>(values.data()),
                  static_cast<std::streamsize>(values.size_bytes()));
      });
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  char magic[sizeof(kMagic)];
  uint64_t length = 0;
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError(path.string() + ": not a factgen checkpoint");
  }
  if (!in.read(reinterpret_cast<char*>(&length), sizeof(length)) || length > (1u << 30)) {
    throw DataError(path.string() + ": bad header length");
  }
  std::string text(length, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(length))) {
    throw DataError(path.string() + ": truncated header");
  }

  Checkpoint checkpoint;
  json tensors;
  try {
    const json header = json::parse(text);
    checkpoint.hp = hyperparams_from_json(header.at("hyperparams"));
    checkpoint.hp.validate();
    checkpoint.vocab_fingerprint = header.at("vocab_fingerprint").get<uint64_t>();
    const json& p = header.at("progress");
    checkpoint.progress.step = p.at("step").get<size_t>();
    if (!p.at("best_dev").is_null()) checkpoint.progress.best_dev = p.at("best_dev").get<double>();
    checkpoint.progress.best_step = p.at("best_step").get<size_t>();
    checkpoint.progress.stale_evals = p.at("stale_evals").get<size_t>();
    checkpoint.progress.stopped_early = p.at("stopped_early").get<bool>();
    checkpoint.metadata = header.at("metadata").get<std::map<std::string, std::string>>();
    tensors = header.at("tensors");
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": bad checkpoint header: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(path.string() + ": bad hyperparameters: " + e.what());
  }

  checkpoint.params = ModelParams::zeros(checkpoint.hp);
  size_t index = 0;
  checkpoint.params.for_each([&](const std::string& name, std::span<double> values, size_t rows,
                                 size_t cols) {
    if (index >= tensors.size()) throw DataError(path.string() + ": missing tensor " + name);
    const json& t = tensors[index++];
    if (t.value("name", "") != name || t.value("rows", size_t{0}) != rows ||
        t.value("cols", size_t{0}) != cols) {
      throw DataError(path.string() + ": tensor table mismatch at " + name);
    }
    if (!in.read(reinterpret_cast<char*>(values.data()),
                 static_cast<std::streamsize>(values.size_bytes()))) {
      throw DataError(path.string() + ": truncated tensor " + name);
    }
  });
  if (index != tensors.size()) throw DataError(path.string() + ": unexpected extra tensors");
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError(path.string() + ": trailing bytes");
  }
  return checkpoint;
}

}  // namespace factgen
