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

#include "factgen/dataset_io.h"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "factgen/error.h"

namespace factgen {
namespace {

using nlohmann::json;

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

bool skip_line(const std::string& line) {
  return line.empty() || line.front() == '#' || line.find_first_not_of(" \t\r") == std::string::npos;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, '\t')) fields.push_back(field);
  if (!line.empty() && line.back() == '\t') fields.emplace_back();
  return fields;
}

void write_header(std::ostream& out, const std::string& header) {
  std::istringstream lines(header);
  std::string line;
  while (std::getline(lines, line)) out << "# " << line << "\n";
}

BiographyInstance parse_instance(const json& j, size_t line_index, bool require_sentence) {
  BiographyInstance instance;
  if (j.contains("id")) {
    instance.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
  } else {
    instance.id = std::to_string(line_index);
  }
  instance.record.title = tokenize(j.at("title").get<std::string>());
  if (instance.record.title.empty()) throw DataError("empty title");
  for (const json& f : j.value("facts", json::array())) {
    std::string slot = canonical_slot_name(f.at("slot").get<std::string>());
    if (!is_valid_slot_name(slot)) throw DataError("invalid slot name '" + slot + "'");
    Tokens value = tokenize(normalize_date(f.at("value").get<std::string>()));
    if (value.empty()) throw DataError("empty value for slot " + slot);
    // The title member is authoritative; a TITLE fact is redundant.
    if (slot == kTitleSlot) continue;
    instance.record.facts.push_back(Fact{std::move(slot), std::move(value)});
  }
  if (j.contains("sentence")) instance.sentence = tokenize(j["sentence"].get<std::string>());
  if (require_sentence && instance.sentence.empty()) throw DataError("empty sentence");
  return instance;
}

}  // namespace

std::vector<BiographyInstance> read_instances_jsonl(const std::filesystem::path& path,
                                                    bool require_sentence) {
  std::ifstream in = open_input(path);
  std::vector<BiographyInstance> instances;
  std::string line;
  for (size_t index = 0; std::getline(in, line); ++index) {
    if (skip_line(line)) continue;
    try {
      instances.push_back(parse_instance(json::parse(line), index, require_sentence));
    } catch (const json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(index + 1) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(index + 1) + ": " + e.what());
    }
  }
  return instances;
}

void write_instances_jsonl(const std::filesystem::path& path,
                           const std::vector<BiographyInstance>& instances) {
  std::ofstream out = open_output(path);
  for (const BiographyInstance& instance : instances) {
    json facts = json::array();
    for (const Fact& fact : instance.record.facts) {
      facts.push_back({{"slot", fact.slot}, {"value", join(fact.value)}});
    }
    json j = {{"id", instance.id},
              {"title", join(instance.record.title)},
              {"facts", std::move(facts)},
              {"sentence", join(instance.sentence)}};
    out << j.dump() << "\n";
  }
}

void write_slot_table(const std::filesystem::path& path, const SlotFrequency& table,
                      const std::string& header) {
  std::ofstream out = open_output(path);
  write_header(out, header);
  for (auto& [slot, n] : table.ranked()) out << slot << "\t" << n << "\n";
}

SlotFrequency read_slot_table(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  SlotFrequency table;
  std::string line;
  for (size_t index = 1; std::getline(in, line); ++index) {
    if (skip_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 2) {
      throw DataError(path.string() + ":" + std::to_string(index) + ": expected slot<TAB>count");
    }
    table.add(fields[0], std::stoull(fields[1]));
  }
  return table;
}

void write_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab,
                      const std::string& header) {
  std::ofstream out = open_output(path);
  write_header(out, header);
  out << "# copy_tokens=" << vocab.copy_tokens() << "\n";
  for (size_t i = 0; i < vocab.size(); ++i) {
    const auto id = static_cast<int32_t>(i);
    out << i << "\t" << vocab.token(id) << "\t" << vocab.count(id) << "\n";
  }
}

Vocabulary read_vocabulary(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  size_t copy_tokens = 0;
  for (size_t index = 1; std::getline(in, line); ++index) {
    if (line.starts_with("# copy_tokens=")) {
      copy_tokens = std::stoul(line.substr(14));
      continue;
    }
    if (skip_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3 || std::stoul(fields[0]) != rows.size()) {
      throw DataError(path.string() + ":" + std::to_string(index) + ": bad vocabulary row");
    }
    rows.push_back(std::move(fields));
  }
  Vocabulary vocab(copy_tokens);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i < vocab.reserved()) {
      if (rows[i][1] != vocab.token(static_cast<int32_t>(i))) {
        throw DataError(path.string() + ": reserved token mismatch at id " + std::to_string(i));
      }
      continue;
    }
    vocab.add(rows[i][1], std::stoull(rows[i][2]));
  }
  return vocab;
}

void write_hypotheses(const std::filesystem::path& path, const std::vector<Hypothesis>& hyps,
                      const std::string& header) {
  std::ofstream out = open_output(path);
  write_header(out, header);
  for (const Hypothesis& h : hyps) out << h.id << "\t" << join(h.tokens) << "\n";
}

std::vector<Hypothesis> read_hypotheses(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<Hypothesis> hyps;
  std::string line;
  for (size_t index = 1; std::getline(in, line); ++index) {
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(index) + ": expected id<TAB>sentence");
    }
    hyps.push_back(Hypothesis{line.substr(0, tab), tokenize(line.substr(tab + 1))});
  }
  return hyps;
}

}  // namespace factgen
