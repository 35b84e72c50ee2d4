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

#include "factgen/preference.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "factgen/error.h"

namespace factgen {
namespace {

constexpr int kMaxIterations = 1000;
constexpr double kEpsilon = 1e-15;

// P(a, x) by its power series; converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by Lentz's continued fraction; for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double kTiny = std::numeric_limits<double>::min() / kEpsilon;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

ChiSquare test_or_default(std::span<const uint64_t> counts) {
  uint64_t total = 0;
  for (uint64_t c : counts) total += c;
  return total == 0 ? ChiSquare{} : chi_square_one_way(counts);
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw std::invalid_argument("regularized_gamma_q domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi_square_survival(double statistic, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
  if (statistic <= 0.0) return 1.0;
  return regularized_gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquare chi_square_one_way(std::span<const uint64_t> observed) {
  if (observed.size() < 2) throw std::invalid_argument("chi-square needs at least two cells");
  double total = 0.0;
  for (uint64_t c : observed) total += static_cast<double>(c);
  if (total == 0.0) throw std::invalid_argument("chi-square of all-zero counts");
  const double expected = total / static_cast<double>(observed.size());
  ChiSquare out;
  for (uint64_t c : observed) {
    const double diff = static_cast<double>(c) - expected;
    out.statistic += diff * diff / expected;
  }
  out.p_value = chi_square_survival(out.statistic, static_cast<double>(observed.size() - 1));
  return out;
}

PreferenceSummary aggregate_preferences(std::span<const std::vector<std::string>> judgements) {
  PreferenceSummary summary;
  double agreement = 0.0;
  for (const std::vector<std::string>& votes : judgements) {
    if (votes.empty()) throw std::invalid_argument("preference item without votes");
    std::map<std::string, size_t> tally;
    for (const std::string& v : votes) ++tally[v];
    size_t best = 0;
    size_t leaders = 0;
    std::string label;
    for (const auto& [name, count] : tally) {
      if (count > best) {
        best = count;
        leaders = 1;
        label = name;
      } else if (count == best) {
        ++leaders;
      }
    }
    ItemMajority item;
    item.tie = leaders > 1;
    if (!item.tie) item.label = label;
    item.agreement = static_cast<double>(best) / static_cast<double>(votes.size());
    agreement += item.agreement;
    summary.items.push_back(std::move(item));
  }
  if (!judgements.empty()) agreement /= static_cast<double>(judgements.size());
  summary.agreement = agreement;
  return summary;
}

std::vector<PreferenceItem> read_preferences_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<PreferenceItem> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    PreferenceItem item;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      const nlohmann::json& id = j.at("id");
      item.id = id.is_string() ? id.get<std::string>() : id.dump();
      const auto pair = j.at("pair").get<std::vector<std::string>>();
      if (pair.size() != 2 || pair[0] == pair[1]) throw DataError(where + "pair needs two systems");
      item.pair = {pair[0], pair[1]};
      item.votes = j.at("votes").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + e.what());
    }
    if (item.votes.empty()) throw DataError(where + "no votes");
    for (const std::string& v : item.votes) {
      if (v != item.pair[0] && v != item.pair[1]) throw DataError(where + "vote for " + v);
    }
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<PairwiseResult> pairwise_preferences(std::span<const PreferenceItem> items) {
  std::vector<PairwiseResult> results;
  std::map<std::pair<std::string, std::string>, size_t> index;
  for (const PreferenceItem& item : items) {
    auto key = item.pair[0] < item.pair[1] ? std::pair(item.pair[0], item.pair[1])
                                           : std::pair(item.pair[1], item.pair[0]);
    auto [it, inserted] = index.emplace(key, results.size());
    if (inserted) {
      results.emplace_back();
      results.back().pair = item.pair;
    }
    PairwiseResult& r = results[it->second];
    ++r.items;
    std::array<uint64_t, 2> votes{};
    for (const std::string& v : item.votes) ++votes[v == r.pair[0] ? 0 : 1];
    r.raw_votes[0] += votes[0];
    r.raw_votes[1] += votes[1];
    if (votes[0] == votes[1]) {
      ++r.ties;
    } else {
      ++r.majority_wins[votes[0] > votes[1] ? 0 : 1];
    }
  }
  for (PairwiseResult& r : results) {
    r.majority_test = test_or_default(r.majority_wins);
    r.raw_test = test_or_default(r.raw_votes);
  }
  return results;
}

}  // namespace factgen
