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

// factgen command-line tool.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <CLI11.hpp>
#include <algorithm>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "commands.h"
#include "factgen/error.h"

namespace {

using factgen::cli::Settings;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kNumericError = 3;

// Option values of the selected subcommand, explicit or defaulted.
Settings collect_settings(const CLI::App& sub) {
  Settings settings;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config") continue;
    std::string value;
    if (opt->get_expected_max() == 0) {
      value = opt->count() > 0 ? "true" : "false";
    } else if (opt->count() > 0) {
      for (const std::string& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    settings.emplace_back(name, value);
  }
  return settings;
}

// Splices "--key=value" pairs from `--config FILE` in front of the other
// arguments of the subcommand, so explicit flags take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (size_t i = 0; i < args.size(); ++i) {
    std::string path;
    size_t consumed = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      consumed = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(std::strlen("--config="));
      consumed = 1;
    } else {
      continue;
    }
    args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i + consumed));
    const auto injected = factgen::cli::read_config_file(path);
    // The subcommand name is the first argument.
    args.insert(args.begin() + (args.empty() ? 0 : 1), injected.begin(), injected.end());
    break;
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace factgen::cli;
  CLI::App app{"Fact-to-biography generation: data preparation, baselines, training and evaluation"};
  app.name("factgen");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();

  auto add_config = [](CLI::App* sub) {
    sub->add_option("--config", "Flat key=value file; command-line flags override it")->type_name("FILE");
  };

  PrepareOptions prepare;
  CLI::App* prepare_cmd = app.add_subcommand("prepare", "Filter, split and index raw fact/sentence pairs");
  add_config(prepare_cmd);
  prepare_cmd->add_option("--raw", prepare.raw, "Raw JSON-lines input")->required();
  prepare_cmd->add_option("--out", prepare.out, "Dataset directory to create")->required();
  prepare_cmd->add_option("--seed", prepare.dataset.seed, "Shuffle seed");
  prepare_cmd->add_option("--min-len", prepare.dataset.min_len, "Minimum sentence length in tokens");
  prepare_cmd->add_option("--max-len", prepare.dataset.max_len, "Maximum sentence length in tokens");
  prepare_cmd->add_option("--min-facts", prepare.dataset.min_facts, "Minimum facts per instance, TITLE included");
  prepare_cmd->add_option("--top-k-slots", prepare.dataset.top_k_slots, "Keep facts of the k most frequent slots");
  prepare_cmd->add_option("--split-ratios", prepare.dataset.split_ratios, "Train, dev and test shares")
      ->expected(3)
      ->delimiter(',');
  prepare_cmd->add_option("--max-vocab", prepare.max_vocab, "Vocabulary size cap, reserved ids included");
  prepare_cmd->add_option("--copy-budget", prepare.copy_budget, "Number of title copy tokens");

  TrainOptions train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train the encoder-decoder (optionally with the autoencoder)");
  add_config(train_cmd);
  train_cmd->add_option("--data", train.data, "Prepared dataset directory")->required();
  train_cmd->add_option("--out", train.out, "Checkpoint to write")->required();
  train_cmd->add_option("--mode", train.mode, "s2s or s2s_ae; s2s forces ae-weight 0")
      ->check(CLI::IsMember({"s2s", "s2s_ae"}));
  train_cmd->add_option("--log", train.log, "Per-step TSV training log");
  train_cmd->add_option("--resume", train.resume, "Continue from this checkpoint (its hyperparameters win)");
  train_cmd->add_option("--seed", train.hp.seed, "Initialization and batching seed");
  train_cmd->add_option("--embed-dim", train.hp.embed_dim);
  train_cmd->add_option("--hidden-dim", train.hp.hidden_dim);
  train_cmd->add_option("--layers", train.hp.layers);
  train_cmd->add_option("--batch-size", train.hp.batch_size);
  train_cmd->add_option("--learning-rate", train.hp.learning_rate);
  train_cmd->add_option("--ae-weight", train.hp.ae_weight, "Weight of the reconstruction loss");
  train_cmd->add_option("--clip-norm", train.hp.clip_norm, "Global gradient norm cap");
  train_cmd->add_option("--max-decode-len", train.hp.max_decode_len);
  train_cmd->add_option("--backward-attention", train.hp.backward_attention, "Attention in the reconstruction network");
  train_cmd->add_option("--max-steps", train.train.max_steps, "Total step budget, counted from step 0");
  train_cmd->add_option("--eval-every", train.train.eval_every, "Dev evaluation interval; 0 disables");
  train_cmd->add_option("--patience", train.train.patience, "Evaluations without improvement before stopping");
  train_cmd->add_option("--dev-limit", train.dev_limit, "Score only the first n dev instances; 0 uses all");

  GenerateOptions generate;
  CLI::App* generate_cmd = app.add_subcommand("generate", "Write one sentence per instance of a split");
  add_config(generate_cmd);
  generate_cmd->add_option("--data", generate.data, "Prepared dataset directory")->required();
  generate_cmd->add_option("--split", generate.split, "train, dev or test");
  generate_cmd->add_option("--checkpoint", generate.checkpoint, "Trained model");
  generate_cmd->add_flag("--baseline", generate.baseline, "Use the template system instead of a model");
  generate_cmd->add_option("--out", generate.out, "Hypotheses file (id<TAB>sentence)")->required();

  LmTrainOptions lm_train;
  CLI::App* lm_train_cmd = app.add_subcommand("lm-train", "Train a Kneser-Ney language model on a split");
  add_config(lm_train_cmd);
  lm_train_cmd->add_option("--data", lm_train.data, "Prepared dataset directory")->required();
  lm_train_cmd->add_option("--split", lm_train.split, "train, dev or test");
  lm_train_cmd->add_option("--scheme", lm_train.scheme, "Templating: none, title or full");
  lm_train_cmd->add_option("--order", lm_train.order, "n-gram order")->check(CLI::Range(2, 9));
  lm_train_cmd->add_option("--out", lm_train.out, "Model file")->required();

  LmPplOptions lm_ppl;
  CLI::App* lm_ppl_cmd = app.add_subcommand("lm-ppl", "Perplexity of a split under a language model");
  add_config(lm_ppl_cmd);
  lm_ppl_cmd->add_option("--model", lm_ppl.model, "Model file from lm-train")->required();
  lm_ppl_cmd->add_option("--data", lm_ppl.data, "Prepared dataset directory")->required();
  lm_ppl_cmd->add_option("--split", lm_ppl.split, "train, dev or test");
  lm_ppl_cmd->add_option("--out", lm_ppl.out, "Optional result file");

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "BLEU with bootstrap interval and fact-level scores");
  add_config(eval_cmd);
  eval_cmd->add_option("--hyp", eval.hypotheses, "Hypotheses file (id<TAB>sentence)")->required();
  eval_cmd->add_option("--data", eval.data, "Dataset directory: references and input facts");
  eval_cmd->add_option("--split", eval.split, "train, dev or test");
  eval_cmd->add_option("--refs", eval.references, "References file (id<TAB>sentence); overrides the split");
  eval_cmd->add_option("--annotations", eval.annotations, "Fact annotations of the hypotheses (JSON lines)");
  eval_cmd->add_option("--reference-annotations", eval.reference_annotations,
                       "Fact annotations of the references (JSON lines)");
  eval_cmd->add_flag("--detect-facts", eval.detect_facts,
                     "Find expressed facts by value matching where annotations are missing");
  eval_cmd->add_option("--samples", eval.report.bootstrap_samples, "Bootstrap resamples");
  eval_cmd->add_option("--level", eval.report.level, "Confidence level")->check(CLI::Range(0.5, 0.999));
  eval_cmd->add_option("--seed", eval.report.seed, "Bootstrap seed");
  eval_cmd->add_option("--min-group", eval.report.min_group, "Fact-count groups below this are flagged");
  eval_cmd->add_option("--out", eval.out, "Output prefix; writes PREFIX.json and PREFIX.tsv")->required();

  ReportCommandOptions report;
  CLI::App* report_cmd = app.add_subcommand("report", "Compare eval reports and test preference votes");
  add_config(report_cmd);
  report_cmd->add_option("--preferences", report.preferences, "Pairwise votes (JSON lines)");
  report_cmd->add_option("--eval", report.evals, "name=report.json, repeatable")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  report_cmd->add_option("--out", report.out, "Output file; stdout when omitted");

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  } catch (const factgen::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }

  try {
    const CLI::App* chosen = app.get_subcommands().front();
    const Settings settings = collect_settings(*chosen);
    if (chosen == prepare_cmd) run_prepare(prepare, settings, std::cout);
    if (chosen == train_cmd) run_train(train, settings, std::cout);
    if (chosen == generate_cmd) run_generate(generate, settings, std::cout);
    if (chosen == lm_train_cmd) run_lm_train(lm_train, settings, std::cout);
    if (chosen == lm_ppl_cmd) run_lm_ppl(lm_ppl, settings, std::cout);
    if (chosen == eval_cmd) run_eval(eval, settings, std::cout);
    if (chosen == report_cmd) run_report(report, settings, std::cout);
  } catch (const factgen::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const factgen::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return 0;
}
