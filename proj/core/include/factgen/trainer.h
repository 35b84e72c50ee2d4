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

#ifndef FACTGEN_TRAINER_H_
#define FACTGEN_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

#include "factgen/seq2seq.h"

namespace factgen {

// Batches of example indices for one epoch: shuffle, sort by input length
// inside windows of 16 batches, cut into batches, shuffle batch order.
std::vector<std::vector<size_t>> epoch_batches(std::span<const Example> examples,
                                               size_t batch_size, uint64_t seed, uint64_t epoch);

// Token-weighted teacher-forced loss of the forward network.
double dev_loss(std::span<const Example> examples, const ModelParams& params);

struct TrainConfig {
  size_t max_steps = 10000;
  // Dev loss is measured every eval_every steps; 0 disables evaluation.
  size_t eval_every = 500;
  // Stop after this many evaluations without improvement; 0 disables.
  size_t patience = 3;
};

struct TrainProgress {
  size_t step = 0;  // steps completed
  double best_dev = std::numeric_limits<double>::infinity();
  size_t best_step = 0;
  size_t stale_evals = 0;
  bool stopped_early = false;
};

struct TrainLogRow {
  size_t step = 0;  // 1-based index of the step just taken
  LossBreakdown loss;
  double wall_time = 0.0;  // seconds since train() was entered
};

// Runs SGD from `progress.step` until max_steps or patience runs out. Batch
// order depends only on hp.seed and the step, so resuming from a saved
// (params, progress) pair continues the same trajectory. `log` receives one
// TSV row per step.
void train(std::span<const Example> train_set, std::span<const Example> dev_set,
           const Hyperparams& hp, const TrainConfig& config, ModelParams& params,
           TrainProgress& progress, std::ostream* log = nullptr,
           const std::function<void(const TrainLogRow&)>& on_step = {});

// "step<TAB>forward_loss<TAB>reconstruction_loss<TAB>total<TAB>wall_time".
void write_log_header(std::ostream& out);
void write_log_row(std::ostream& out, const TrainLogRow& row);

}  // namespace factgen

#endif  // FACTGEN_TRAINER_H_
