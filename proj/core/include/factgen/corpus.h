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

#ifndef FACTGEN_CORPUS_H_
#define FACTGEN_CORPUS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace factgen {

using Tokens = std::vector<std::string>;

inline constexpr std::string_view kTitleSlot = "TITLE";

// The fifteen most frequent person slots, most frequent first.
const std::vector<std::string>& default_slot_schema();

// Nonempty, uppercase ASCII letters, digits and underscores, starting with a
// letter.
bool is_valid_slot_name(std::string_view name);

// Maps known source aliases onto schema names (COUNTRY_OF_CITIZENSHIP is
// stored as CITIZENSHIP). Other names are returned unchanged.
std::string canonical_slot_name(std::string_view name);

struct Fact {
  std::string slot;
  Tokens value;

  bool operator==(const Fact&) const = default;
};

// An entity's title plus its non-title facts. The title is the TITLE slot's
// value and always linearizes first.
struct FactRecord {
  Tokens title;
  std::vector<Fact> facts;

  // Number of facts including TITLE.
  size_t fact_count() const { return facts.size() + 1; }
  // First fact with the given slot, or nullptr.
  const Fact* find(std::string_view slot) const;
  bool has(std::string_view slot) const { return find(slot) != nullptr; }

  bool operator==(const FactRecord&) const = default;
};

struct BiographyInstance {
  std::string id;
  FactRecord record;
  Tokens sentence;

  bool operator==(const BiographyInstance&) const = default;
};

struct DatasetConfig {
  size_t min_len = 10;
  size_t max_len = 37;
  size_t min_facts = 6;
  size_t top_k_slots = 15;
  std::array<double, 3> split_ratios{0.8, 0.1, 0.1};
  uint64_t seed = 1;

  // Throws std::invalid_argument on violated invariants.
  void validate() const;
};

// Lowercases ASCII letters and splits on whitespace and on the punctuation
// characters ( ) , . ; : " – and -, each of which becomes its own token. A
// hyphen with a digit on both sides stays inside its token, so ISO dates
// survive; slashes never split.
Tokens tokenize(std::string_view text);

std::string join(std::span<const std::string> tokens, std::string_view sep = " ");

// Rewrites dd/mm/yyyy as yyyy-mm-dd. Anything else is returned unchanged.
std::string normalize_date(std::string_view value);

// Corpus-level slot occurrence counts. Ranking is by descending count with
// ties broken by slot name.
class SlotFrequency {
 public:
  void add(std::string_view slot, uint64_t n = 1);
  uint64_t count(std::string_view slot) const;
  std::vector<std::pair<std::string, uint64_t>> ranked() const;
  std::vector<std::string> top(size_t k) const;
  bool empty() const { return counts_.empty(); }

  // Stable-sorts record facts by rank; repeats of a slot keep source order.
  void order(FactRecord& record) const;

  // Counts TITLE once per instance plus every fact occurrence.
  static SlotFrequency count(std::span<const BiographyInstance> instances);

 private:
  std::map<std::string, uint64_t, std::less<>> counts_;
};

// TITLE, title tokens, then each fact's slot name followed by its value.
// Throws DataError when a value (or the title) is empty.
Tokens linearize(const FactRecord& record);

// Inverse of linearize given the set of slot-name tokens.
FactRecord delinearize(std::span<const std::string> tokens,
                       const std::set<std::string, std::less<>>& slot_names);

struct FilterStats {
  size_t input = 0;
  size_t too_short = 0;
  size_t too_long = 0;
  size_t too_few_facts = 0;
  size_t kept = 0;

  std::map<std::string, size_t> histogram() const;
};

struct Dataset {
  std::vector<BiographyInstance> train;
  std::vector<BiographyInstance> dev;
  std::vector<BiographyInstance> test;
  // Counted over the training split; used to order facts in every split.
  SlotFrequency slot_frequency;
  FilterStats stats;
};

// Restricts facts to the top-k slots counted over `raw`, drops instances by
// sentence length and fact count, shuffles with the configured seed and
// partitions by split ratio (largest-remainder rounding). Throws DataError
// when nothing survives filtering.
Dataset prepare_dataset(std::vector<BiographyInstance> raw, const DatasetConfig& config);

struct LengthBounds {
  size_t min_len;
  size_t max_len;

  bool operator==(const LengthBounds&) const = default;
};

// Nearest-rank percentiles of sentence token counts.
LengthBounds compute_length_percentiles(std::span<const BiographyInstance> raw, double lo,
                                        double hi);

// Copy-action tokens: TITLE0, TITLE1, ...
std::string copy_token(size_t index);
std::optional<size_t> copy_index(std::string_view token);

inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kGoToken = "<go>";
inline constexpr std::string_view kEosToken = "<eos>";
inline constexpr std::string_view kUnkToken = "<unk>";

// Replaces every sentence token equal to title token i (i < copy_budget) by
// TITLE{i}; when the title repeats a token the lowest index wins. The
// record's title is rewritten the same way, so input and output share copy
// tokens. Surplus title tokens stay literal.
BiographyInstance delexicalize_title(const BiographyInstance& instance, size_t copy_budget);

// Fills copy tokens from `title` (dropping out-of-range ones) and replaces
// UNKs that precede the first real content token with the first title token.
Tokens relexicalize(std::span<const std::string> tokens, std::span<const std::string> title);

}  // namespace factgen

#endif  // FACTGEN_CORPUS_H_
