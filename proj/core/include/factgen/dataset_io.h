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

#ifndef FACTGEN_DATASET_IO_H_
#define FACTGEN_DATASET_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "factgen/corpus.h"
#include "factgen/vocabulary.h"

namespace factgen {

// Reads {"title", "facts": [{"slot", "value"}], "sentence"} lines. Text is
// tokenized, date values normalized, slot aliases canonicalized. The id is
// the "id" member when present, otherwise the zero-based line index. Blank
// lines are skipped. Errors name the offending line.
std::vector<BiographyInstance> read_instances_jsonl(const std::filesystem::path& path,
                                                    bool require_sentence = true);

// Writes instances with tokens joined by single spaces, so re-reading is
// lossless.
void write_instances_jsonl(const std::filesystem::path& path,
                           const std::vector<BiographyInstance>& instances);

// TSV "slot<TAB>count" ranked; lines starting with '#' are comments.
void write_slot_table(const std::filesystem::path& path, const SlotFrequency& table,
                      const std::string& header);
SlotFrequency read_slot_table(const std::filesystem::path& path);

// TSV "id<TAB>token<TAB>count".
void write_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab,
                      const std::string& header);
Vocabulary read_vocabulary(const std::filesystem::path& path);

// "id<TAB>sentence" hypotheses; '#' comment lines are skipped.
struct Hypothesis {
  std::string id;
  Tokens tokens;
};
void write_hypotheses(const std::filesystem::path& path, const std::vector<Hypothesis>& hyps,
                      const std::string& header);
std::vector<Hypothesis> read_hypotheses(const std::filesystem::path& path);

}  // namespace factgen

#endif  // FACTGEN_DATASET_IO_H_
