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

#include "factgen/report.h"

#include <algorithm>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace factgen {
namespace {

using nlohmann::ordered_json;

SlotSet slots_of(const std::vector<ExpressedFact>& facts) {
  SlotSet out;
  for (const ExpressedFact& f : facts) out.insert(f.slot);
  return out;
}

ordered_json prf_json(const PRF& prf, size_t items) {
  return {{"items", items}, {"precision", prf.precision}, {"recall", prf.recall}, {"f1", prf.f1}};
}

std::string number(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

}  // namespace

EvalReport build_report(const std::vector<EvalItem>& items, const ReportOptions& options) {
  if (items.empty()) throw std::invalid_argument("nothing to evaluate");
  EvalReport report;
  report.config = options.config;
  report.seed = options.seed;
  report.instances = items.size();

  std::vector<Tokens> hyps;
  std::vector<Tokens> refs;
  std::vector<size_t> counts;
  bool counts_known = true;
  double length = 0.0;
  PRFAccumulator content;
  PRFAccumulator hallucination;
  std::vector<FactMentionAnnotation> annotated;
  std::vector<Tokens> annotated_hyps;
  for (const EvalItem& item : items) {
    hyps.push_back(item.hypothesis);
    refs.push_back(item.reference);
    counts.push_back(item.fact_count);
    counts_known = counts_known && item.fact_count > 0;
    length += static_cast<double>(item.hypothesis.size());
    if (item.system_expressed) {
      annotated.push_back({item.id, "system", *item.system_expressed});
      annotated_hyps.push_back(item.hypothesis);
      if (item.reference_expressed) {
        content.add(slots_of(*item.system_expressed), slots_of(*item.reference_expressed));
      }
      if (item.input_slots) hallucination.add(*item.system_expressed, *item.input_slots);
    }
  }
  report.mean_length = length / static_cast<double>(items.size());
  report.bleu = corpus_bleu(hyps, refs);
  report.ci = bootstrap_ci(hyps, refs, options.bootstrap_samples, options.level, options.seed);
  report.ci.lo = std::min(report.ci.lo, report.bleu);
  report.ci.hi = std::max(report.ci.hi, report.bleu);

  if (content.items() > 0) {
    report.content = content.result();
    report.content_items = content.items();
  }
  if (hallucination.items() > 0) {
    report.hallucination = hallucination.result();
    report.hallucination_items = hallucination.items();
  }
  if (!annotated.empty()) report.density = fact_density(annotated, annotated_hyps);
  if (counts_known) {
    report.by_fact_count = bleu_by_fact_count(hyps, refs, counts, options.min_group,
                                              options.bootstrap_samples, options.seed);
  }
  return report;
}

std::string report_to_json(const EvalReport& report) {
  ordered_json j;
  j["seed"] = report.seed;
  j["config"] = report.config;
  j["instances"] = report.instances;
  j["bleu"] = report.bleu;
  j["bleu_ci95"] = {report.ci.lo, report.ci.hi};
  j["mean_sentence_length"] = report.mean_length;
  if (report.content) j["content_selection"] = prf_json(*report.content, report.content_items);
  if (report.hallucination) {
    j["hallucination"] = prf_json(*report.hallucination, report.hallucination_items);
  }
  if (report.density) j["mean_facts_per_sentence"] = report.density->facts_per_sentence;
  ordered_json rows = ordered_json::array();
  for (const FactCountRow& row : report.by_fact_count) {
    rows.push_back({{"fact_count", row.fact_count},
                    {"instances", row.instances},
                    {"bleu", row.bleu},
                    {"ci95", {row.ci.lo, row.ci.hi}},
                    {"small", row.small}});
  }
  j["bleu_by_fact_count"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string report_to_tsv(const EvalReport& report) {
  std::ostringstream out;
  out << "# seed=" << report.seed << "\n";
  for (const auto& [key, value] : report.config) out << "config\t" << key << '\t' << value << '\n';
  out << "corpus\tinstances\t" << report.instances << '\n';
  out << "corpus\tbleu\t" << number(report.bleu) << '\n';
  out << "corpus\tbleu_ci95_lo\t" << number(report.ci.lo) << '\n';
  out << "corpus\tbleu_ci95_hi\t" << number(report.ci.hi) << '\n';
  out << "corpus\tmean_sentence_length\t" << number(report.mean_length) << '\n';
  auto prf_rows = [&out](const std::string& section, const PRF& prf, size_t items) {
    out << section << "\titems\t" << items << '\n';
    out << section << "\tprecision\t" << number(prf.precision) << '\n';
    out << section << "\trecall\t" << number(prf.recall) << '\n';
    out << section << "\tf1\t" << number(prf.f1) << '\n';
  };
  if (report.content) prf_rows("content_selection", *report.content, report.content_items);
  if (report.hallucination) {
    prf_rows("hallucination", *report.hallucination, report.hallucination_items);
  }
  if (report.density) {
    out << "density\tmean_facts_per_sentence\t" << number(report.density->facts_per_sentence)
        << '\n';
  }
  for (const FactCountRow& row : report.by_fact_count) {
    const std::string key = "facts=" + std::to_string(row.fact_count);
    out << "by_fact_count\t" << key << "\tinstances=" << row.instances
        << " bleu=" << number(row.bleu) << " ci95=" << number(row.ci.lo) << ","
        << number(row.ci.hi) << (row.small ? " small" : "") << '\n';
  }
  return out.str();
}

}  // namespace factgen
