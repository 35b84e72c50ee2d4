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

#ifndef FACTGEN_CONTENT_H_
#define FACTGEN_CONTENT_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "factgen/corpus.h"

namespace factgen {

// Facts are identified by slot name.
using SlotSet = std::set<std::string, std::less<>>;

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Set-based P/R/F1. Two empty sets score (1, 1, 1); an empty system set
// against a nonempty gold set, or the reverse, scores (0, 0, 0).
PRF content_prf(const SlotSet& system, const SlotSet& gold);

struct ExpressedFact {
  std::string slot;
  bool correct = true;
};

// Scores expressed facts against the input facts. A fact expressed with a
// wrong value counts toward |S| but never toward |S n G|. A slot listed
// more than once counts once, and is correct only if every listing is.
PRF hallucination_prf(std::span<const ExpressedFact> expressed, const SlotSet& input);

struct FactMentionAnnotation {
  std::string id;
  std::string system;
  std::vector<ExpressedFact> expressed;
};

// JSON lines {"id", "system", "expressed": [{"slot", "correct"}]}. Throws
// DataError naming the line on malformed input or duplicate slots.
std::vector<FactMentionAnnotation> read_annotations_jsonl(const std::filesystem::path& path);

// Mean number of expressed facts per sentence and mean token length. Throws
// std::invalid_argument on empty input or a length mismatch.
struct Density {
  double facts_per_sentence = 0.0;
  double tokens_per_sentence = 0.0;
};
Density fact_density(std::span<const FactMentionAnnotation> annotations,
                     std::span<const Tokens> hypotheses);

// Automatic stand-in for human annotation: a fact is expressed when its
// full value, or for an ISO date its spoken form ("12 november 1988"),
// occurs as a contiguous token span in the sentence. TITLE is included.
// Every detected fact is marked correct.
std::vector<ExpressedFact> detect_expressed_facts(const FactRecord& record,
                                                  std::span<const std::string> sentence);

// Slots of the record, TITLE included.
SlotSet record_slots(const FactRecord& record);

// Micro-averaged accumulator: sums set sizes over items before dividing.
class PRFAccumulator {
 public:
  void add(const SlotSet& system, const SlotSet& gold);
  void add(std::span<const ExpressedFact> expressed, const SlotSet& input);
  PRF result() const;
  size_t items() const { return items_; }

 private:
  size_t items_ = 0;
  size_t system_ = 0;
  size_t gold_ = 0;
  size_t overlap_ = 0;
};

}  // namespace factgen

#endif  // FACTGEN_CONTENT_H_
