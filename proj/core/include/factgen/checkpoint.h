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

#ifndef FACTGEN_CHECKPOINT_H_
#define FACTGEN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "factgen/seq2seq.h"
#include "factgen/trainer.h"

namespace factgen {

// On disk: the 8 bytes "FGCKPT01", a little-endian uint64 header length, a
// JSON header (hyperparameters, vocabulary fingerprint, progress, metadata
// and a tensor table of name/rows/cols) and then every tensor's values as
// row-major little-endian float64 in table order.
struct Checkpoint {
  Hyperparams hp;
  ModelParams params;
  uint64_t vocab_fingerprint = 0;
  TrainProgress progress;
  std::map<std::string, std::string> metadata;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);

// Throws DataError on a malformed file or tensor shape mismatch.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace factgen

#endif  // FACTGEN_CHECKPOINT_H_
