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

#include "factgen/corpus.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "factgen/error.h"
#include "factgen/rng.h"

namespace factgen {
namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// UTF-8 for U+2013 EN DASH.
constexpr std::string_view kEnDash = "\xe2\x80\x93";

bool is_single_punct(char c) {
  switch (c) {
    case '(': case ')': case ',': case '.': case ';': case ':': case '"':
      return true;
    default:
      return false;
  }
}

}  // namespace

const std::vector<std::string>& default_slot_schema() {
  static const std::vector<std::string> schema = {
      "TITLE",           "SEX_OR_GENDER",  "DATE_OF_BIRTH",  "OCCUPATION",
      "CITIZENSHIP",     "DATE_OF_DEATH",  "PLACE_OF_BIRTH", "EDUCATED_AT",
      "SPORTS_TEAM",     "PLACE_OF_DEATH", "POSITION_HELD",  "PARTICIPANT_OF",
      "POLITICAL_PARTY", "AWARD_RECEIVED", "SPORT",
  };
  return schema;
}

bool is_valid_slot_name(std::string_view name) {
  if (name.empty() || name.front() < 'A' || name.front() > 'Z') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || is_digit(c) || c == '_';
  });
}

std::string canonical_slot_name(std::string_view name) {
  if (name == "COUNTRY_OF_CITIZENSHIP") return "CITIZENSHIP";
  return std::string(name);
}

const Fact* FactRecord::find(std::string_view slot) const {
  for (const Fact& fact : facts) {
    if (fact.slot == slot) return &fact;
  }
  return nullptr;
}

void DatasetConfig::validate() const {
  if (min_len > max_len) throw std::invalid_argument("min_len must not exceed max_len");
  if (min_facts < 1) throw std::invalid_argument("min_facts must be at least 1");
  if (top_k_slots < 1) throw std::invalid_argument("top_k_slots must be at least 1");
  double sum = 0.0;
  for (double r : split_ratios) {
    if (!(r > 0.0)) throw std::invalid_argument("split ratios must be positive");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split ratios must sum to 1");
}

Tokens tokenize(std::string_view text) {
  Tokens tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (is_space(c)) {
      flush();
    } else if (text.substr(i, kEnDash.size()) == kEnDash) {
      flush();
      tokens.emplace_back(kEnDash);
      i += kEnDash.size() - 1;
    } else if (c == '-') {
      const bool inside_digits = !current.empty() && is_digit(current.back()) &&
                                 i + 1 < text.size() && is_digit(text[i + 1]);
      if (inside_digits) {
        current.push_back(c);
      } else {
        flush();
        tokens.emplace_back("-");
      }
    } else if (is_single_punct(c)) {
      flush();
      tokens.emplace_back(1, c);
    } else if (c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      current.push_back(c);
    }
  }
  flush();
  return tokens;
}

std::string join(std::span<const std::string> tokens, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(tokens[i]);
  }
  return out;
}

std::string normalize_date(std::string_view value) {
  // dd/mm/yyyy
  if (value.size() != 10 || value[2] != '/' || value[5] != '/') return std::string(value);
  for (size_t i : {0, 1, 3, 4, 6, 7, 8, 9}) {
    if (!is_digit(value[i])) return std::string(value);
  }
  std::string iso;
  iso.append(value.substr(6, 4)).append("-").append(value.substr(3, 2)).append("-").append(
      value.substr(0, 2));
  return iso;
}

void SlotFrequency::add(std::string_view slot, uint64_t n) {
  auto it = counts_.find(slot);
  if (it == counts_.end()) {
    counts_.emplace(std::string(slot), n);
  } else {
    it->second += n;
  }
}

uint64_t SlotFrequency::count(std::string_view slot) const {
  auto it = counts_.find(slot);
  return it == counts_.end() ? 0 : it->second;
}

std::vector<std::pair<std::string, uint64_t>> SlotFrequency::ranked() const {
  std::vector<std::pair<std::string, uint64_t>> out(counts_.begin(), counts_.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

std::vector<std::string> SlotFrequency::top(size_t k) const {
  std::vector<std::string> out;
  for (auto& [slot, n] : ranked()) {
    if (out.size() == k) break;
    out.push_back(slot);
  }
  return out;
}

void SlotFrequency::order(FactRecord& record) const {
  std::stable_sort(record.facts.begin(), record.facts.end(),
                   [this](const Fact& a, const Fact& b) {
                     const uint64_t ca = count(a.slot);
                     const uint64_t cb = count(b.slot);
                     if (ca != cb) return ca > cb;
                     return a.slot < b.slot;
                   });
}

SlotFrequency SlotFrequency::count(std::span<const BiographyInstance> instances) {
  SlotFrequency table;
  for (const BiographyInstance& instance : instances) {
    table.add(kTitleSlot);
    for (const Fact& fact : instance.record.facts) table.add(fact.slot);
  }
  return table;
}

Tokens linearize(const FactRecord& record) {
  if (record.title.empty()) throw DataError("record has an empty title");
  Tokens out;
  out.emplace_back(kTitleSlot);
  out.insert(out.end(), record.title.begin(), record.title.end());
  for (const Fact& fact : record.facts) {
    if (fact.value.empty()) throw DataError("fact " + fact.slot + " has an empty value");
    out.push_back(fact.slot);
    out.insert(out.end(), fact.value.begin(), fact.value.end());
  }
  return out;
}

FactRecord delinearize(std::span<const std::string> tokens,
                       const std::set<std::string, std::less<>>& slot_names) {
  FactRecord record;
  Tokens* target = nullptr;
  for (const std::string& token : tokens) {
    if (slot_names.contains(token)) {
      if (token == kTitleSlot) {
        target = &record.title;
      } else {
        record.facts.push_back(Fact{token, {}});
        target = &record.facts.back().value;
      }
    } else if (target != nullptr) {
      target->push_back(token);
    }
  }
  return record;
}

std::map<std::string, size_t> FilterStats::histogram() const {
  return {{"input", input},
          {"too_short", too_short},
          {"too_long", too_long},
          {"too_few_facts", too_few_facts},
          {"kept", kept}};
}

Dataset prepare_dataset(std::vector<BiographyInstance> raw, const DatasetConfig& config) {
  config.validate();
  if (raw.empty()) throw DataError("no input instances");

  const SlotFrequency raw_counts = SlotFrequency::count(raw);
  const std::vector<std::string> top = raw_counts.top(config.top_k_slots);
  const std::set<std::string, std::less<>> keep_slots(top.begin(), top.end());

  Dataset dataset;
  dataset.stats.input = raw.size();
  std::vector<BiographyInstance> kept;
  for (BiographyInstance& instance : raw) {
    std::erase_if(instance.record.facts,
                  [&](const Fact& f) { return !keep_slots.contains(f.slot); });
    const size_t len = instance.sentence.size();
    if (len < config.min_len) {
      ++dataset.stats.too_short;
    } else if (len > config.max_len) {
      ++dataset.stats.too_long;
    } else if (instance.record.fact_count() < config.min_facts) {
      ++dataset.stats.too_few_facts;
    } else {
      kept.push_back(std::move(instance));
    }
  }
  dataset.stats.kept = kept.size();
  if (kept.empty()) {
    std::string msg = "no instances left after filtering:";
    for (auto& [reason, n] : dataset.stats.histogram()) {
      msg += " " + reason + "=" + std::to_string(n);
    }
    throw DataError(msg);
  }

  Rng rng(config.seed);
  rng.shuffle(kept);

  // Largest-remainder apportionment; leftovers go to the largest fractional
  // parts, earlier splits first on ties.
  const size_t n = kept.size();
  std::array<size_t, 3> sizes{};
  std::array<double, 3> remainders{};
  size_t assigned = 0;
  for (size_t i = 0; i < 3; ++i) {
    const double exact = config.split_ratios[i] * static_cast<double>(n);
    sizes[i] = static_cast<size_t>(std::floor(exact + 1e-9));
    remainders[i] = exact - static_cast<double>(sizes[i]);
    assigned += sizes[i];
  }
  std::array<size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return remainders[a] > remainders[b]; });
  for (size_t i = 0; assigned < n; ++i, ++assigned) ++sizes[order[i % 3]];

  auto begin = std::make_move_iterator(kept.begin());
  dataset.train.assign(begin, begin + static_cast<std::ptrdiff_t>(sizes[0]));
  dataset.dev.assign(begin + static_cast<std::ptrdiff_t>(sizes[0]),
                     begin + static_cast<std::ptrdiff_t>(sizes[0] + sizes[1]));
  dataset.test.assign(begin + static_cast<std::ptrdiff_t>(sizes[0] + sizes[1]),
                      std::make_move_iterator(kept.end()));

  dataset.slot_frequency = SlotFrequency::count(dataset.train);
  for (auto* split : {&dataset.train, &dataset.dev, &dataset.test}) {
    for (BiographyInstance& instance : *split) dataset.slot_frequency.order(instance.record);
  }
  return dataset;
}

LengthBounds compute_length_percentiles(std::span<const BiographyInstance> raw, double lo,
                                        double hi) {
  if (raw.empty()) throw std::invalid_argument("no instances");
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) throw std::invalid_argument("bad percentiles");
  std::vector<size_t> lengths;
  lengths.reserve(raw.size());
  for (const BiographyInstance& instance : raw) lengths.push_back(instance.sentence.size());
  std::sort(lengths.begin(), lengths.end());
  const double n = static_cast<double>(lengths.size());
  auto nearest_rank = [&](double p) {
    const auto rank = static_cast<size_t>(std::ceil(p * n - 1e-9));
    return lengths[std::clamp<size_t>(rank, 1, lengths.size()) - 1];
  };
  return {nearest_rank(lo), nearest_rank(hi)};
}

std::string copy_token(size_t index) { return std::string(kTitleSlot) + std::to_string(index); }

std::optional<size_t> copy_index(std::string_view token) {
  if (token.size() <= kTitleSlot.size() || !token.starts_with(kTitleSlot)) return std::nullopt;
  size_t value = 0;
  for (char c : token.substr(kTitleSlot.size())) {
    if (!is_digit(c)) return std::nullopt;
    value = value * 10 + static_cast<size_t>(c - '0');
  }
  return value;
}

BiographyInstance delexicalize_title(const BiographyInstance& instance, size_t copy_budget) {
  BiographyInstance out = instance;
  const size_t limit = std::min(copy_budget, instance.record.title.size());
  std::vector<bool> replaced(out.sentence.size(), false);
  for (size_t i = 0; i < limit; ++i) {
    const std::string& name = instance.record.title[i];
    for (size_t pos = 0; pos < out.sentence.size(); ++pos) {
      if (!replaced[pos] && instance.sentence[pos] == name) {
        out.sentence[pos] = copy_token(i);
        replaced[pos] = true;
      }
    }
  }
  for (size_t i = 0; i < limit; ++i) out.record.title[i] = copy_token(i);
  return out;
}

Tokens relexicalize(std::span<const std::string> tokens, std::span<const std::string> title) {
  Tokens out;
  out.reserve(tokens.size());
  bool leading = true;
  for (const std::string& token : tokens) {
    if (auto index = copy_index(token)) {
      if (*index < title.size()) out.push_back(title[*index]);
    } else if (token == kUnkToken && leading) {
      if (!title.empty()) out.push_back(title.front());
    } else {
      leading = false;
      out.push_back(token);
    }
  }
  return out;
}

}  // namespace factgen
