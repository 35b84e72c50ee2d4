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

#include "factgen/trainer.h"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <stdexcept>

#include "factgen/rng.h"

namespace factgen {
namespace {

constexpr size_t kBucketWindow = 16;

}  // namespace

std::vector<std::vector<size_t>> epoch_batches(std::span<const Example> examples,
                                               size_t batch_size, uint64_t seed, uint64_t epoch) {
  if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  std::vector<size_t> order(examples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(mix_seed(seed, epoch));
  rng.shuffle(order);

  const size_t window = batch_size * kBucketWindow;
  for (size_t begin = 0; begin < order.size(); begin += window) {
    const auto first = order.begin() + static_cast<std::ptrdiff_t>(begin);
    const auto last = order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), begin + window));
    std::stable_sort(first, last, [&examples](size_t a, size_t b) {
      return examples[a].input.size() < examples[b].input.size();
    });
  }

  std::vector<std::vector<size_t>> batches;
  for (size_t begin = 0; begin < order.size(); begin += batch_size) {
    const size_t end = std::min(order.size(), begin + batch_size);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(begin),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  rng.shuffle(batches);
  return batches;
}

double dev_loss(std::span<const Example> examples, const ModelParams& params) {
  if (examples.empty()) throw std::invalid_argument("empty dev set");
  double nll = 0.0;
  size_t tokens = 0;
  for (const Example& ex : examples) {
    nll += teacher_forced_loss(ex.input, ex.target, params) * static_cast<double>(ex.target.size());
    tokens += ex.target.size();
  }
  return nll / static_cast<double>(tokens);
}

void train(std::span<const Example> train_set, std::span<const Example> dev_set,
           const Hyperparams& hp, const TrainConfig& config, ModelParams& params,
           TrainProgress& progress, std::ostream* log,
           const std::function<void(const TrainLogRow&)>& on_step) {
  hp.validate();
  if (train_set.empty()) throw std::invalid_argument("empty training set");
  const bool evaluate = config.eval_every > 0 && !dev_set.empty();
  const auto start = std::chrono::steady_clock::now();

  const size_t per_epoch = (train_set.size() + hp.batch_size - 1) / hp.batch_size;
  uint64_t cached_epoch = UINT64_MAX;
  std::vector<std::vector<size_t>> batches;
  std::vector<Example> batch;

  while (progress.step < config.max_steps && !progress.stopped_early) {
    const uint64_t epoch = progress.step / per_epoch;
    if (epoch != cached_epoch) {
      batches = epoch_batches(train_set, hp.batch_size, hp.seed, epoch);
      cached_epoch = epoch;
    }
    batch.clear();
    for (size_t i : batches[progress.step % per_epoch]) batch.push_back(train_set[i]);

    TrainLogRow row;
    row.loss = train_step(batch, params, hp);
    row.step = ++progress.step;
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (log != nullptr) write_log_row(*log, row);
    if (on_step) on_step(row);

    if (evaluate && progress.step % config.eval_every == 0) {
      const double loss = dev_loss(dev_set, params);
      if (loss < progress.best_dev) {
        progress.best_dev = loss;
        progress.best_step = progress.step;
        progress.stale_evals = 0;
      } else if (config.patience > 0 && ++progress.stale_evals >= config.patience) {
        progress.stopped_early = true;
      }
    }
  }
  if (log != nullptr) log->flush();
}

void write_log_header(std::ostream& out) {
  out << "step\tforward_loss\treconstruction_loss\ttotal\twall_time\n";
}

void write_log_row(std::ostream& out, const TrainLogRow& row) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << row.step << '\t' << std::setprecision(17) << row.loss.forward_loss << '\t'
      << row.loss.reconstruction_loss << '\t' << row.loss.total << '\t' << std::setprecision(6)
      << std::fixed << row.wall_time << '\n';
  out.flags(flags);
  out.precision(precision);
}

}  // namespace factgen
