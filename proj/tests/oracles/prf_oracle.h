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

#ifndef FACTGEN_TESTS_ORACLES_PRF_ORACLE_H_
#define FACTGEN_TESTS_ORACLES_PRF_ORACLE_H_

#include <algorithm>
#include <string>
#include <vector>

#include "factgen/content.h"
#include "factgen/rng.h"

namespace factgen::oracle {

// Set arithmetic over plain vectors, independent of std::set operations.
// Slots in `wrong` never count toward the overlap.
inline PRF prf(const std::vector<std::string>& system, const std::vector<std::string>& gold,
               const std::vector<std::string>& wrong = {}) {
  if (system.empty() && gold.empty()) return {1, 1, 1};
  if (system.empty() || gold.empty()) return {0, 0, 0};
  double overlap = 0;
  for (const auto& s : system) {
    const bool in_gold = std::find(gold.begin(), gold.end(), s) != gold.end();
    const bool is_wrong = std::find(wrong.begin(), wrong.end(), s) != wrong.end();
    if (in_gold && !is_wrong) overlap += 1;
  }
  const double p = overlap / static_cast<double>(system.size());
  const double r = overlap / static_cast<double>(gold.size());
  return {p, r, p + r == 0 ? 0.0 : 2 * p * r / (p + r)};
}

inline std::vector<std::string> random_subset(Rng& rng, const std::vector<std::string>& universe) {
  std::vector<std::string> out;
  for (const auto& s : universe) {
    if (rng.below(2) == 1) out.push_back(s);
  }
  return out;
}

inline const std::vector<std::string>& slot_universe() {
  static const std::vector<std::string> universe = {"TITLE",          "DATE_OF_BIRTH", "OCCUPATION",
                                                    "CITIZENSHIP",    "PLACE_OF_BIRTH", "DATE_OF_DEATH",
                                                    "AWARD_RECEIVED"};
  return universe;
}

}  // namespace factgen::oracle

#endif  // FACTGEN_TESTS_ORACLES_PRF_ORACLE_H_
