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

#ifndef FACTGEN_TOOLS_COMMANDS_H_
#define FACTGEN_TOOLS_COMMANDS_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "factgen/corpus.h"
#include "factgen/report.h"
#include "factgen/seq2seq.h"
#include "factgen/trainer.h"

namespace factgen::cli {

// Resolved option values of one invocation, in declaration order. Written
// into every artifact so it can be reproduced.
using Settings = std::vector<std::pair<std::string, std::string>>;

struct PrepareOptions {
  std::filesystem::path raw;
  std::filesystem::path out;
  DatasetConfig dataset;
  size_t max_vocab = 20000;
  size_t copy_budget = 4;
};

struct TrainOptions {
  std::filesystem::path data;
  std::filesystem::path out;
  std::filesystem::path log;
  std::filesystem::path resume;
  std::string mode = "s2s_ae";
  Hyperparams hp;
  TrainConfig train;
  size_t dev_limit = 0;  // 0 keeps the whole dev split
};

struct GenerateOptions {
  std::filesystem::path data;
  std::filesystem::path checkpoint;
  std::filesystem::path out;
  std::string split = "test";
  bool baseline = false;
};

struct LmTrainOptions {
  std::filesystem::path data;
  std::filesystem::path out;
  std::string split = "train";
  std::string scheme = "full";
  int order = 5;
};

struct LmPplOptions {
  std::filesystem::path model;
  std::filesystem::path data;
  std::filesystem::path out;
  std::string split = "test";
};

struct EvalOptions {
  std::filesystem::path hypotheses;
  std::filesystem::path data;
  std::filesystem::path references;
  std::filesystem::path annotations;
  std::filesystem::path reference_annotations;
  std::filesystem::path out;
  std::string split = "test";
  bool detect_facts = false;
  ReportOptions report;
};

struct ReportCommandOptions {
  std::filesystem::path preferences;
  std::vector<std::string> evals;  // name=path.json
  std::filesystem::path out;
};

// Each command throws DataError for unusable input, NumericError for a
// diverged model and std::invalid_argument for inconsistent options.
void run_prepare(const PrepareOptions& options, const Settings& settings, std::ostream& out);
void run_train(TrainOptions options, const Settings& settings, std::ostream& out);
void run_generate(const GenerateOptions& options, const Settings& settings, std::ostream& out);
void run_lm_train(const LmTrainOptions& options, const Settings& settings, std::ostream& out);
void run_lm_ppl(const LmPplOptions& options, const Settings& settings, std::ostream& out);
void run_eval(const EvalOptions& options, const Settings& settings, std::ostream& out);
void run_report(const ReportCommandOptions& options, const Settings& settings, std::ostream& out);

// Reads "key = value" lines ('#' comments, blank lines ignored) into
// "--key=value" arguments. Throws DataError naming the line.
std::vector<std::string> read_config_file(const std::filesystem::path& path);

}  // namespace factgen::cli

#endif  // FACTGEN_TOOLS_COMMANDS_H_
