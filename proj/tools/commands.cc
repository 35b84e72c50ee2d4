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

#include "commands.h"

#include <fstream>
#include <iomanip>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "factgen/checkpoint.h"
#include "factgen/content.h"
#include "factgen/dataset_io.h"
#include "factgen/error.h"
#include "factgen/ngram_lm.h"
#include "factgen/preference.h"
#include "factgen/template_baseline.h"
#include "factgen/vocabulary.h"

namespace factgen::cli {
namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kSplits[] = {"train", "dev", "test"};

std::string settings_header(const Settings& settings) {
  std::string out;
  for (const auto& [key, value] : settings) out += key + "=" + value + "\n";
  return out;
}

std::map<std::string, std::string> settings_map(const Settings& settings) {
  return {settings.begin(), settings.end()};
}

std::string hex(uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

void require_file(const fs::path& path, const std::string& what) {
  if (path.empty()) throw std::invalid_argument(what + " is required");
  if (!fs::exists(path)) throw DataError(what + " not found: " + path.string());
}

fs::path split_path(const fs::path& data, const std::string& split) {
  for (const char* known : kSplits) {
    if (split == known) return data / (split + ".jsonl");
  }
  throw std::invalid_argument("unknown split '" + split + "' (expected train, dev or test)");
}

std::vector<BiographyInstance> read_split(const fs::path& data, const std::string& split) {
  const fs::path path = split_path(data, split);
  require_file(path, "split file");
  return read_instances_jsonl(path);
}

Vocabulary read_dataset_vocabulary(const fs::path& data) {
  const fs::path path = data / "vocab.tsv";
  require_file(path, "vocabulary");
  return read_vocabulary(path);
}

std::ofstream open_text(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

void run_prepare(const PrepareOptions& options, const Settings& settings, std::ostream& out) {
  require_file(options.raw, "raw input");
  if (options.out.empty()) throw std::invalid_argument("--out is required");
  options.dataset.validate();
  Dataset dataset = prepare_dataset(read_instances_jsonl(options.raw), options.dataset);
  const Vocabulary vocab =
      build_model_vocabulary(dataset.train, options.max_vocab, options.copy_budget);

  fs::create_directories(options.out);
  write_instances_jsonl(options.out / "train.jsonl", dataset.train);
  write_instances_jsonl(options.out / "dev.jsonl", dataset.dev);
  write_instances_jsonl(options.out / "test.jsonl", dataset.test);
  const std::string header = settings_header(settings);
  write_slot_table(options.out / "slots.tsv", dataset.slot_frequency, header);
  write_vocabulary(options.out / "vocab.tsv", vocab, header);

  ordered_json manifest;
  manifest["seed"] = options.dataset.seed;
  manifest["config"] = settings_map(settings);
  manifest["splits"] = {{"train", dataset.train.size()},
                        {"dev", dataset.dev.size()},
                        {"test", dataset.test.size()}};
  manifest["filter"] = dataset.stats.histogram();
  manifest["vocab_size"] = vocab.size();
  manifest["vocab_fingerprint"] = hex(vocab.fingerprint());
  open_text(options.out / "manifest.json") << manifest.dump(2) << "\n";

  for (const auto& [reason, n] : dataset.stats.histogram()) out << "filter\t" << reason << "\t" << n << "\n";
  out << "split\ttrain\t" << dataset.train.size() << "\n"
      << "split\tdev\t" << dataset.dev.size() << "\n"
      << "split\ttest\t" << dataset.test.size() << "\n"
      << "vocab\tsize\t" << vocab.size() << "\n";
}

void run_train(TrainOptions options, const Settings& settings, std::ostream& out) {
  if (options.out.empty()) throw std::invalid_argument("--out is required");
  if (options.mode == "s2s") {
    options.hp.ae_weight = 0.0;
  } else if (options.mode != "s2s_ae") {
    throw std::invalid_argument("--mode must be s2s or s2s_ae");
  }
  const Vocabulary vocab = read_dataset_vocabulary(options.data);
  const auto train_split = read_split(options.data, "train");
  auto dev_split = read_split(options.data, "dev");
  if (options.dev_limit > 0 && dev_split.size() > options.dev_limit) dev_split.resize(options.dev_limit);

  Checkpoint state;
  if (!options.resume.empty()) {
    require_file(options.resume, "checkpoint to resume");
    state = load_checkpoint(options.resume);
    if (state.vocab_fingerprint != vocab.fingerprint()) {
      throw DataError("checkpoint vocabulary does not match " + (options.data / "vocab.tsv").string());
    }
  } else {
    state.hp = options.hp;
    state.hp.vocab_size = vocab.size();
    state.hp.validate();
    state.params = ModelParams::initialize(state.hp);
    state.vocab_fingerprint = vocab.fingerprint();
  }

  std::vector<Example> train_set;
  for (const auto& instance : train_split) train_set.push_back(make_example(instance, vocab));
  std::vector<Example> dev_set;
  for (const auto& instance : dev_split) dev_set.push_back(make_example(instance, vocab));

  std::ofstream log;
  if (!options.log.empty()) {
    const bool append = !options.resume.empty() && fs::exists(options.log);
    if (options.log.has_parent_path()) fs::create_directories(options.log.parent_path());
    log.open(options.log, append ? std::ios::app : std::ios::trunc);
    if (!log) throw DataError("cannot write " + options.log.string());
    if (!append) {
      std::istringstream lines(settings_header(settings));
      for (std::string line; std::getline(lines, line);) log << "# " << line << "\n";
      write_log_header(log);
    }
  }

  const size_t start = state.progress.step;
  train(train_set, dev_set, state.hp, options.train, state.params, state.progress,
        log.is_open() ? &log : nullptr);

  state.metadata = settings_map(settings);
  state.metadata["mode"] = options.mode;
  save_checkpoint(options.out, state);
  out << "steps\t" << start << "->" << state.progress.step << "\n";
  if (std::isfinite(state.progress.best_dev)) {
    out << "best_dev\t" << state.progress.best_dev << "\tstep " << state.progress.best_step << "\n";
  }
  if (state.progress.stopped_early) out << "stopped_early\t1\n";
}

void run_generate(const GenerateOptions& options, const Settings& settings, std::ostream& out) {
  if (options.out.empty()) throw std::invalid_argument("--out is required");
  if (options.baseline == !options.checkpoint.empty()) {
    throw std::invalid_argument("pass exactly one of --checkpoint and --baseline");
  }
  const auto instances = read_split(options.data, options.split);
  std::vector<Hypothesis> hyps;
  hyps.reserve(instances.size());
  std::string header = settings_header(settings);
  if (options.baseline) {
    header += "system=base\n";
    for (const auto& instance : instances) hyps.push_back({instance.id, render(instance.record)});
  } else {
    require_file(options.checkpoint, "checkpoint");
    const Checkpoint ckpt = load_checkpoint(options.checkpoint);
    const Vocabulary vocab = read_dataset_vocabulary(options.data);
    if (ckpt.vocab_fingerprint != vocab.fingerprint()) {
      throw DataError("vocabulary fingerprint mismatch: checkpoint " + hex(ckpt.vocab_fingerprint) +
                      ", dataset " + hex(vocab.fingerprint()));
    }
    const auto mode = ckpt.metadata.find("mode");
    header += "system=" + (mode == ckpt.metadata.end() ? std::string("s2s") : mode->second) + "\n";
    header += "train_seed=" + std::to_string(ckpt.hp.seed) + "\n";
    for (const auto& instance : instances) {
      hyps.push_back({instance.id, generate(instance.record, ckpt.params, vocab, ckpt.hp)});
    }
  }
  write_hypotheses(options.out, hyps, header);
  out << "generated\t" << hyps.size() << "\n";
}

void run_lm_train(const LmTrainOptions& options, const Settings& settings, std::ostream& out) {
  if (options.out.empty()) throw std::invalid_argument("--out is required");
  const auto scheme = parse_scheme(options.scheme);
  if (!scheme) throw std::invalid_argument("--scheme must be none, title or full");
  std::vector<Tokens> sentences;
  for (const auto& instance : read_split(options.data, options.split)) {
    sentences.push_back(apply_scheme(instance, *scheme));
  }
  std::vector<std::string> warnings;
  NGramModel model = NGramModel::train(sentences, options.order, &warnings);
  for (const auto& [key, value] : settings) model.metadata[key] = value;
  model.metadata["scheme"] = std::string(to_string(*scheme));
  std::ofstream file = open_text(options.out);
  model.save(file);
  for (const std::string& w : warnings) out << "warning\t" << w << "\n";
  out << "sentences\t" << sentences.size() << "\n" << "vocab\t" << model.vocabulary_size() << "\n";
}

void run_lm_ppl(const LmPplOptions& options, const Settings& settings, std::ostream& out) {
  require_file(options.model, "language model");
  std::ifstream in(options.model);
  const NGramModel model = NGramModel::load(in);
  const auto scheme_name = model.metadata.find("scheme");
  const auto scheme =
      parse_scheme(scheme_name == model.metadata.end() ? "none" : scheme_name->second);
  if (!scheme) throw DataError("language model names an unknown templating scheme");
  std::vector<Tokens> sentences;
  for (const auto& instance : read_split(options.data, options.split)) {
    sentences.push_back(apply_scheme(instance, *scheme));
  }
  const double ppl = perplexity(model, sentences);
  std::ostringstream line;
  line << std::setprecision(10) << "perplexity\t" << to_string(*scheme) << "\t" << ppl << "\n";
  out << line.str();
  if (!options.out.empty()) {
    std::ofstream file = open_text(options.out);
    std::istringstream lines(settings_header(settings));
    for (std::string l; std::getline(lines, l);) file << "# " << l << "\n";
    file << line.str();
  }
}

void run_eval(const EvalOptions& options, const Settings& settings, std::ostream& out) {
  require_file(options.hypotheses, "hypotheses");
  if (options.out.empty()) throw std::invalid_argument("--out is required");
  const auto hyps = read_hypotheses(options.hypotheses);

  std::map<std::string, Tokens> references;
  std::map<std::string, FactRecord> records;
  if (!options.references.empty()) {
    require_file(options.references, "references");
    for (auto& ref : read_hypotheses(options.references)) references[ref.id] = std::move(ref.tokens);
  }
  if (!options.data.empty()) {
    for (auto& instance : read_split(options.data, options.split)) {
      if (options.references.empty()) references[instance.id] = instance.sentence;
      records[instance.id] = std::move(instance.record);
    }
  }
  if (references.empty()) throw std::invalid_argument("pass --refs or --data");
  if (references.size() != hyps.size()) {
    throw DataError("hypotheses (" + std::to_string(hyps.size()) + ") and references (" +
                    std::to_string(references.size()) + ") are not aligned");
  }

  auto annotations_by_id = [](const fs::path& path) {
    std::map<std::string, std::vector<ExpressedFact>> by_id;
    if (path.empty()) return by_id;
    require_file(path, "annotations");
    for (auto& a : read_annotations_jsonl(path)) by_id[a.id] = std::move(a.expressed);
    return by_id;
  };
  const auto system_ann = annotations_by_id(options.annotations);
  const auto reference_ann = annotations_by_id(options.reference_annotations);
  if (options.detect_facts && records.empty()) {
    throw std::invalid_argument("--detect-facts needs --data for the input facts");
  }

  std::vector<EvalItem> items;
  for (const Hypothesis& h : hyps) {
    auto ref = references.find(h.id);
    if (ref == references.end()) throw DataError("hypothesis id '" + h.id + "' has no reference");
    EvalItem item;
    item.id = h.id;
    item.hypothesis = h.tokens;
    item.reference = ref->second;
    auto record = records.find(h.id);
    if (record != records.end()) {
      item.fact_count = record->second.fact_count();
      item.input_slots = record_slots(record->second);
    }
    if (auto a = system_ann.find(h.id); a != system_ann.end()) {
      item.system_expressed = a->second;
    } else if (options.detect_facts && record != records.end()) {
      item.system_expressed = detect_expressed_facts(record->second, item.hypothesis);
    }
    if (auto a = reference_ann.find(h.id); a != reference_ann.end()) {
      item.reference_expressed = a->second;
    } else if (options.detect_facts && record != records.end()) {
      item.reference_expressed = detect_expressed_facts(record->second, item.reference);
    }
    items.push_back(std::move(item));
  }

  ReportOptions report_options = options.report;
  report_options.config = settings_map(settings);
  const EvalReport report = build_report(items, report_options);
  fs::path json_path = options.out;
  json_path += ".json";
  fs::path tsv_path = options.out;
  tsv_path += ".tsv";
  open_text(json_path) << report_to_json(report);
  open_text(tsv_path) << report_to_tsv(report);
  out << std::setprecision(4) << std::fixed << "bleu\t" << report.bleu << "\t[" << report.ci.lo << ", "
      << report.ci.hi << "]\n";
  if (report.content) {
    out << "content\tP=" << report.content->precision << " R=" << report.content->recall
        << " F1=" << report.content->f1 << "\n";
  }
  if (report.hallucination) out << "hallucination\tP=" << report.hallucination->precision << "\n";
}

void run_report(const ReportCommandOptions& options, const Settings& settings, std::ostream& out) {
  if (options.preferences.empty() && options.evals.empty()) {
    throw std::invalid_argument("pass --preferences and/or --eval");
  }
  std::ostringstream text;
  std::istringstream header(settings_header(settings));
  for (std::string line; std::getline(header, line);) text << "# " << line << "\n";
  text << std::setprecision(6);

  if (!options.evals.empty()) {
    text << "system\tinstances\tbleu\tci_lo\tci_hi\tcontent_p\tcontent_r\tcontent_f1\thallucination_p"
            "\tfacts_per_sentence\n";
    for (const std::string& spec : options.evals) {
      const size_t eq = spec.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--eval expects name=path.json");
      const fs::path path = spec.substr(eq + 1);
      require_file(path, "eval report");
      std::ifstream in(path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
      }
      auto number = [](const nlohmann::json& value) {
        std::ostringstream v;
        v << std::setprecision(6) << value.get<double>();
        return v.str();
      };
      auto field = [&number](const nlohmann::json& obj, const char* section, const char* key) -> std::string {
        return obj.contains(section) ? number(obj[section][key]) : "-";
      };
      text << spec.substr(0, eq) << "\t" << j.value("instances", 0) << "\t" << j.value("bleu", 0.0)
           << "\t" << j["bleu_ci95"][0].get<double>() << "\t" << j["bleu_ci95"][1].get<double>() << "\t"
           << field(j, "content_selection", "precision") << "\t" << field(j, "content_selection", "recall")
           << "\t" << field(j, "content_selection", "f1") << "\t" << field(j, "hallucination", "precision")
           << "\t"
           << (j.contains("mean_facts_per_sentence") ? number(j["mean_facts_per_sentence"]) : std::string("-"))
           << "\n";
    }
  }

  if (!options.preferences.empty()) {
    require_file(options.preferences, "preferences");
    const auto items = read_preferences_jsonl(options.preferences);
    std::vector<std::vector<std::string>> votes;
    for (const auto& item : items) votes.push_back(item.votes);
    text << "agreement\t" << aggregate_preferences(votes).agreement << "\n";
    text << "pair\titems\twins_a\twins_b\tties\tmajority_chi2\tmajority_p\tvotes_a\tvotes_b\traw_chi2\traw_p\n";
    for (const PairwiseResult& r : pairwise_preferences(items)) {
      text << r.pair[0] << " vs " << r.pair[1] << "\t" << r.items << "\t" << r.majority_wins[0] << "\t"
           << r.majority_wins[1] << "\t" << r.ties << "\t" << r.majority_test.statistic << "\t"
           << r.majority_test.p_value << "\t" << r.raw_votes[0] << "\t" << r.raw_votes[1] << "\t"
           << r.raw_test.statistic << "\t" << r.raw_test.p_value << "\n";
    }
  }

  if (options.out.empty()) {
    out << text.str();
  } else {
    open_text(options.out) << text.str();
  }
}

std::vector<std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read config file " + path.string());
  std::vector<std::string> args;
  std::string line;
  for (size_t index = 1; std::getline(in, line); ++index) {
    const size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(index) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const size_t b = s.find_first_not_of(" \t");
      const size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw DataError(path.string() + ":" + std::to_string(index) + ": empty key");
    args.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  return args;
}

}  // namespace factgen::cli
