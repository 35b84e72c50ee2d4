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

#include "factgen/bleu.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "factgen/rng.h"

namespace factgen {
namespace {

Tokens padded(std::span<const std::string> tokens) {
  Tokens out(tokens.begin(), tokens.end());
  while (out.size() < kBleuOrder) out.emplace_back(kBleuPad);
  return out;
}

struct SpanLess {
  bool operator()(std::span<const std::string> a, std::span<const std::string> b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

using NgramCounts = std::map<std::span<const std::string>, uint64_t, SpanLess>;

// Keys view into `tokens`, which must outlive the result.
NgramCounts ngram_counts(const Tokens& tokens, size_t n) {
  NgramCounts counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::span<const std::string>(tokens).subspan(i, n)];
  }
  return counts;
}

void check_pairs(std::span<const Tokens> hypotheses, std::span<const Tokens> references) {
  if (hypotheses.size() != references.size()) {
    throw std::invalid_argument("hypothesis/reference count mismatch: " +
                                std::to_string(hypotheses.size()) + " vs " +
                                std::to_string(references.size()));
  }
  if (hypotheses.empty()) throw std::invalid_argument("BLEU of an empty corpus");
}

// Nearest-rank percentile of sorted values.
double percentile(const std::vector<double>& sorted, double q) {
  const double rank = std::ceil(q * static_cast<double>(sorted.size()) - 1e-9);
  const size_t index = static_cast<size_t>(std::clamp(rank, 1.0, static_cast<double>(sorted.size())));
  return sorted[index - 1];
}

}  // namespace

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (size_t n = 0; n < kBleuOrder; ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  hyp_length += other.hyp_length;
  ref_length += other.ref_length;
  return *this;
}

BleuStats sentence_stats(std::span<const std::string> hypothesis,
                         std::span<const std::string> reference) {
  const Tokens hyp = padded(hypothesis);
  const Tokens ref = padded(reference);
  BleuStats stats;
  stats.hyp_length = hyp.size();
  stats.ref_length = ref.size();
  for (size_t n = 1; n <= kBleuOrder; ++n) {
    const auto hyp_counts = ngram_counts(hyp, n);
    const auto ref_counts = ngram_counts(ref, n);
    for (const auto& [gram, count] : hyp_counts) {
      const auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) stats.matches[n - 1] += std::min(count, it->second);
    }
    stats.totals[n - 1] = hyp.size() - n + 1;
  }
  return stats;
}

double bleu_from_stats(const BleuStats& stats) {
  double log_sum = 0.0;
  for (size_t n = 0; n < kBleuOrder; ++n) {
    if (stats.matches[n] == 0 || stats.totals[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(stats.matches[n]) / static_cast<double>(stats.totals[n]));
  }
  const double c = static_cast<double>(stats.hyp_length);
  const double r = static_cast<double>(stats.ref_length);
  const double brevity = c < r ? std::exp(1.0 - r / c) : 1.0;
  return 100.0 * brevity * std::exp(log_sum / static_cast<double>(kBleuOrder));
}

double sentence_bleu(std::span<const std::string> hypothesis,
                     std::span<const std::string> reference) {
  return bleu_from_stats(sentence_stats(hypothesis, reference));
}

double corpus_bleu(std::span<const Tokens> hypotheses, std::span<const Tokens> references) {
  check_pairs(hypotheses, references);
  BleuStats total;
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    total += sentence_stats(hypotheses[i], references[i]);
  }
  return bleu_from_stats(total);
}

Interval bootstrap_ci(std::span<const Tokens> hypotheses, std::span<const Tokens> references,
                      size_t samples, double level, uint64_t seed) {
  check_pairs(hypotheses, references);
  if (samples == 0) throw std::invalid_argument("bootstrap needs at least one sample");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must be in (0, 1)");
  std::vector<BleuStats> stats;
  stats.reserve(hypotheses.size());
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    stats.push_back(sentence_stats(hypotheses[i], references[i]));
  }
  std::vector<double> scores;
  scores.reserve(samples);
  for (size_t b = 0; b < samples; ++b) {
    Rng rng(mix_seed(seed, b));
    BleuStats total;
    for (size_t i = 0; i < stats.size(); ++i) total += stats[rng.below(stats.size())];
    scores.push_back(bleu_from_stats(total));
  }
  std::sort(scores.begin(), scores.end());
  const double tail = (1.0 - level) / 2.0;
  return {percentile(scores, tail), percentile(scores, 1.0 - tail)};
}

std::vector<FactCountRow> bleu_by_fact_count(std::span<const Tokens> hypotheses,
                                             std::span<const Tokens> references,
                                             std::span<const size_t> fact_counts,
                                             size_t min_group, size_t samples, uint64_t seed) {
  check_pairs(hypotheses, references);
  if (fact_counts.size() != hypotheses.size()) {
    throw std::invalid_argument("fact count list does not match the corpus");
  }
  std::map<size_t, std::vector<size_t>> groups;
  for (size_t i = 0; i < fact_counts.size(); ++i) groups[fact_counts[i]].push_back(i);

  std::vector<FactCountRow> rows;
  for (const auto& [count, members] : groups) {
    std::vector<Tokens> hyp;
    std::vector<Tokens> ref;
    for (size_t i : members) {
      hyp.push_back(hypotheses[i]);
      ref.push_back(references[i]);
    }
    FactCountRow row;
    row.fact_count = count;
    row.instances = members.size();
    row.bleu = corpus_bleu(hyp, ref);
    row.ci = bootstrap_ci(hyp, ref, samples, 0.95, mix_seed(seed, count));
    row.small = members.size() < min_group;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace factgen
