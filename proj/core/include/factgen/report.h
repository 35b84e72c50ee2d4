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

#ifndef FACTGEN_REPORT_H_
#define FACTGEN_REPORT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "factgen/bleu.h"
#include "factgen/content.h"

namespace factgen {

// One aligned evaluation instance. Optional parts enable the fact sections.
struct EvalItem {
  std::string id;
  Tokens hypothesis;
  Tokens reference;
  std::optional<std::vector<ExpressedFact>> system_expressed;
  std::optional<std::vector<ExpressedFact>> reference_expressed;
  std::optional<SlotSet> input_slots;
  size_t fact_count = 0;  // 0 when unknown
};

struct ReportOptions {
  size_t bootstrap_samples = 1000;
  double level = 0.95;
  uint64_t seed = 1;
  size_t min_group = 5;
  // Recorded verbatim in the output.
  std::map<std::string, std::string> config;
};

struct EvalReport {
  std::map<std::string, std::string> config;
  uint64_t seed = 1;
  size_t instances = 0;
  double bleu = 0.0;
  Interval ci;
  double mean_length = 0.0;  // hypothesis tokens
  // Against reference-expressed facts; items with both annotations.
  std::optional<PRF> content;
  size_t content_items = 0;
  // Against the input facts; items with system annotations and inputs.
  std::optional<PRF> hallucination;
  size_t hallucination_items = 0;
  std::optional<Density> density;
  std::vector<FactCountRow> by_fact_count;
};

// Throws std::invalid_argument on an empty item list. The interval is
// widened to contain the point estimate when resampling misses it.
EvalReport build_report(const std::vector<EvalItem>& items, const ReportOptions& options);

std::string report_to_json(const EvalReport& report);
// "section<TAB>key<TAB>value" rows.
std::string report_to_tsv(const EvalReport& report);

}  // namespace factgen

#endif  // FACTGEN_REPORT_H_
