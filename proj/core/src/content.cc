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

#include "factgen/content.h"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "factgen/error.h"
#include "factgen/template_baseline.h"

namespace factgen {
namespace {

PRF prf_from_counts(size_t system, size_t gold, size_t overlap) {
  if (system == 0 && gold == 0) return {1.0, 1.0, 1.0};
  if (system == 0 || gold == 0) return {0.0, 0.0, 0.0};
  PRF out;
  out.precision = static_cast<double>(overlap) / static_cast<double>(system);
  out.recall = static_cast<double>(overlap) / static_cast<double>(gold);
  const double sum = out.precision + out.recall;
  out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

struct Counts {
  size_t system = 0;
  size_t overlap = 0;
};

Counts expressed_counts(std::span<const ExpressedFact> expressed, const SlotSet& input) {
  std::map<std::string, bool, std::less<>> merged;
  for (const ExpressedFact& fact : expressed) {
    auto [it, inserted] = merged.emplace(fact.slot, fact.correct);
    if (!inserted) it->second = it->second && fact.correct;
  }
  Counts counts;
  counts.system = merged.size();
  for (const auto& [slot, correct] : merged) {
    if (correct && input.contains(slot)) ++counts.overlap;
  }
  return counts;
}

size_t overlap_size(const SlotSet& a, const SlotSet& b) {
  size_t n = 0;
  for (const std::string& s : a) n += b.contains(s) ? 1 : 0;
  return n;
}

}  // namespace

PRF content_prf(const SlotSet& system, const SlotSet& gold) {
  return prf_from_counts(system.size(), gold.size(), overlap_size(system, gold));
}

PRF hallucination_prf(std::span<const ExpressedFact> expressed, const SlotSet& input) {
  const Counts c = expressed_counts(expressed, input);
  return prf_from_counts(c.system, input.size(), c.overlap);
}

std::vector<FactMentionAnnotation> read_annotations_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<FactMentionAnnotation> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    FactMentionAnnotation ann;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      const nlohmann::json& id = j.at("id");
      ann.id = id.is_string() ? id.get<std::string>() : id.dump();
      ann.system = j.value("system", "");
      for (const nlohmann::json& e : j.at("expressed")) {
        ExpressedFact fact;
        fact.slot = canonical_slot_name(e.at("slot").get<std::string>());
        fact.correct = e.value("correct", true);
        ann.expressed.push_back(std::move(fact));
      }
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + e.what());
    }
    SlotSet seen;
    for (const ExpressedFact& fact : ann.expressed) {
      if (!is_valid_slot_name(fact.slot)) throw DataError(where + "invalid slot " + fact.slot);
      if (!seen.insert(fact.slot).second) throw DataError(where + "duplicate slot " + fact.slot);
    }
    out.push_back(std::move(ann));
  }
  return out;
}

Density fact_density(std::span<const FactMentionAnnotation> annotations,
                     std::span<const Tokens> hypotheses) {
  if (annotations.empty()) throw std::invalid_argument("fact density of an empty sample");
  if (annotations.size() != hypotheses.size()) {
    throw std::invalid_argument("annotation/hypothesis count mismatch");
  }
  double facts = 0.0;
  double tokens = 0.0;
  for (size_t i = 0; i < annotations.size(); ++i) {
    facts += static_cast<double>(annotations[i].expressed.size());
    tokens += static_cast<double>(hypotheses[i].size());
  }
  const double n = static_cast<double>(annotations.size());
  return {facts / n, tokens / n};
}

std::vector<ExpressedFact> detect_expressed_facts(const FactRecord& record,
                                                  std::span<const std::string> sentence) {
  auto occurs = [&sentence](const Tokens& value) {
    if (value.empty() || value.size() > sentence.size()) return false;
    return std::search(sentence.begin(), sentence.end(), value.begin(), value.end()) !=
           sentence.end();
  };
  std::vector<ExpressedFact> out;
  SlotSet seen;
  if (occurs(record.title)) {
    out.push_back({std::string(kTitleSlot), true});
    seen.insert(std::string(kTitleSlot));
  }
  const TemplateRules rules = TemplateRules::defaults();
  auto spoken_date = [&rules](const Tokens& value) {
    if (value.size() != 1) return Tokens{};
    try {
      return format_date(value.front(), rules);
    } catch (const DataError&) {
      return Tokens{};
    }
  };
  for (const Fact& fact : record.facts) {
    if (!seen.contains(fact.slot) && (occurs(fact.value) || occurs(spoken_date(fact.value)))) {
      out.push_back({fact.slot, true});
      seen.insert(fact.slot);
    }
  }
  return out;
}

SlotSet record_slots(const FactRecord& record) {
  SlotSet slots{std::string(kTitleSlot)};
  for (const Fact& fact : record.facts) slots.insert(fact.slot);
  return slots;
}

void PRFAccumulator::add(const SlotSet& system, const SlotSet& gold) {
  ++items_;
  system_ += system.size();
  gold_ += gold.size();
  overlap_ += overlap_size(system, gold);
}

void PRFAccumulator::add(std::span<const ExpressedFact> expressed, const SlotSet& input) {
  const Counts c = expressed_counts(expressed, input);
  ++items_;
  system_ += c.system;
  gold_ += input.size();
  overlap_ += c.overlap;
}

PRF PRFAccumulator::result() const { return prf_from_counts(system_, gold_, overlap_); }

}  // namespace factgen
