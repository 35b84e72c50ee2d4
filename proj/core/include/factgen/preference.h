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

#ifndef FACTGEN_PREFERENCE_H_
#define FACTGEN_PREFERENCE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace factgen {

// Q(a, x) = Gamma(a, x) / Gamma(a) for a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

// Upper tail of the chi-square distribution.
double chi_square_survival(double statistic, double dof);

struct ChiSquare {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Goodness of fit against a uniform split, k - 1 degrees of freedom.
// Throws std::invalid_argument for fewer than two cells or a zero total.
ChiSquare chi_square_one_way(std::span<const uint64_t> observed);

struct ItemMajority {
  std::string label;  // empty on a tie
  bool tie = false;
  double agreement = 0.0;  // share of votes for the most voted label
};

struct PreferenceSummary {
  std::vector<ItemMajority> items;
  double agreement = 0.0;  // mean of the per-item agreement
};

// Each item needs at least one vote.
PreferenceSummary aggregate_preferences(std::span<const std::vector<std::string>> judgements);

struct PreferenceItem {
  std::string id;
  std::array<std::string, 2> pair;
  std::vector<std::string> votes;
};

// JSON lines {"id", "pair": [a, b], "votes": [...]}. Votes must name one of
// the pair. Throws DataError naming the line.
std::vector<PreferenceItem> read_preferences_jsonl(const std::filesystem::path& path);

struct PairwiseResult {
  std::array<std::string, 2> pair;
  size_t items = 0;
  std::array<uint64_t, 2> majority_wins{};  // tied items excluded
  size_t ties = 0;
  std::array<uint64_t, 2> raw_votes{};
  ChiSquare majority_test;  // on majority_wins
  ChiSquare raw_test;       // on raw_votes
};

// Groups items by their unordered system pair (first-seen orientation).
// Tests are left at (0, 1) when a count vector is all zero.
std::vector<PairwiseResult> pairwise_preferences(std::span<const PreferenceItem> items);

}  // namespace factgen

#endif  // FACTGEN_PREFERENCE_H_
