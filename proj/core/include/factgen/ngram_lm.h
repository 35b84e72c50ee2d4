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

#ifndef FACTGEN_NGRAM_LM_H_
#define FACTGEN_NGRAM_LM_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "factgen/corpus.h"

namespace factgen {

enum class TemplatingScheme { kNone, kTitle, kFull };

std::string_view to_string(TemplatingScheme scheme);
std::optional<TemplatingScheme> parse_scheme(std::string_view name);

// NONE: raw sentence. TITLE: title token i becomes TITLE_i. FULL: value token
// j of any fact (title included) becomes SLOT_j; on overlaps the earlier fact
// in linearized order wins.
Tokens apply_scheme(const BiographyInstance& instance, TemplatingScheme scheme);

inline constexpr std::string_view kSentenceStart = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";

// Per-order modified Kneser-Ney discounts for counts 1, 2 and 3+.
struct Discounts {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  bool fallback = false;
};

// Interpolated modified Kneser-Ney n-gram model over a closed vocabulary
// (training tokens, </s> and <unk>). Scoring uses the equivalent backoff
// form: every observed n-gram stores its interpolated probability, every
// observed context its interpolation weight.
class NGramModel {
 public:
  // Sentences are wrapped as <s> w1 .. wm </s>. Orders with degenerate
  // count-of-counts use D = 0.75 and append a message to `warnings`.
  static NGramModel train(std::span<const Tokens> sentences, int order,
                          std::vector<std::string>* warnings = nullptr);

  int order() const { return order_; }
  size_t vocabulary_size() const { return vocab_size_; }
  // Index k-1 holds the discounts of order k.
  const std::vector<Discounts>& discounts() const { return discounts_; }

  // Natural-log probability of `word` after `context`; only the last
  // order-1 context tokens are used and unknown tokens score as <unk>.
  double log_prob(std::span<const std::string> context, std::string_view word) const;
  double prob(std::span<const std::string> context, std::string_view word) const;

  // Every scorable word: the closed vocabulary.
  std::vector<std::string> vocabulary() const;

  // Free-form key/value pairs written to the model header.
  std::map<std::string, std::string> metadata;

  void save(std::ostream& out) const;
  static NGramModel load(std::istream& in);

 private:
  int32_t intern(std::string_view token);
  int32_t lookup(std::string_view token) const;
  double score(std::span<const int32_t> context, int32_t word) const;

  int order_ = 0;
  size_t vocab_size_ = 0;
  std::vector<Discounts> discounts_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int32_t> ids_;
  // probs_[k-1]: k-gram key -> probability; weights_[k]: k-token context key
  // -> interpolation weight (index 0 is the empty context).
  std::vector<std::unordered_map<std::string, double>> probs_;
  std::vector<std::unordered_map<std::string, double>> weights_;
};

// exp(-(sum of natural-log probabilities) / T) where T counts every scored
// token including one </s> per sentence.
double perplexity(const NGramModel& model, std::span<const Tokens> sentences);

}  // namespace factgen

#endif  // FACTGEN_NGRAM_LM_H_
