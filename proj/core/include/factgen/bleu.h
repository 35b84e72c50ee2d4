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

#ifndef FACTGEN_BLEU_H_
#define FACTGEN_BLEU_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "factgen/corpus.h"

namespace factgen {

inline constexpr size_t kBleuOrder = 4;

// Sentences shorter than four tokens are right-padded with this token. It
// cannot come out of tokenize, so it never matches a real token.
inline constexpr std::string_view kBleuPad = "\x01pad";

// Clipped n-gram matches and totals for one hypothesis/reference pair after
// padding.
struct BleuStats {
  std::array<uint64_t, kBleuOrder> matches{};
  std::array<uint64_t, kBleuOrder> totals{};
  uint64_t hyp_length = 0;
  uint64_t ref_length = 0;

  BleuStats& operator+=(const BleuStats& other);
};

BleuStats sentence_stats(std::span<const std::string> hypothesis,
                         std::span<const std::string> reference);

// Geometric mean of the four precisions times the brevity penalty, on a 0-100
// scale. Any zero precision gives 0.
double bleu_from_stats(const BleuStats& stats);

// Unsmoothed sentence-level BLEU with the same padding rule.
double sentence_bleu(std::span<const std::string> hypothesis,
                     std::span<const std::string> reference);

// Throws std::invalid_argument on empty input or mismatched lengths.
double corpus_bleu(std::span<const Tokens> hypotheses, std::span<const Tokens> references);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Percentile bootstrap over sentence pairs. Resample b draws from
// Rng(mix_seed(seed, b)); bounds are nearest-rank percentiles of the sorted
// resample scores.
Interval bootstrap_ci(std::span<const Tokens> hypotheses, std::span<const Tokens> references,
                      size_t samples = 1000, double level = 0.95, uint64_t seed = 1);

struct FactCountRow {
  size_t fact_count = 0;
  size_t instances = 0;
  double bleu = 0.0;
  Interval ci;
  bool small = false;  // fewer than min_group instances
};

// Groups pairs by fact_counts[i] (ascending), scoring each group separately.
std::vector<FactCountRow> bleu_by_fact_count(std::span<const Tokens> hypotheses,
                                             std::span<const Tokens> references,
                                             std::span<const size_t> fact_counts,
                                             size_t min_group = 5, size_t samples = 1000,
                                             uint64_t seed = 1);

}  // namespace factgen

#endif  // FACTGEN_BLEU_H_
