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

#ifndef FACTGEN_VOCABULARY_H_
#define FACTGEN_VOCABULARY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "factgen/corpus.h"

namespace factgen {

// Shared input/output token inventory. Ids 0-3 are <pad>, <go>, <eos>,
// <unk>; ids 4 .. 4+k-1 are the copy tokens TITLE0 .. TITLE{k-1}; regular
// tokens follow.
class Vocabulary {
 public:
  static constexpr int32_t kPad = 0;
  static constexpr int32_t kGo = 1;
  static constexpr int32_t kEos = 2;
  static constexpr int32_t kUnk = 3;
  static constexpr int32_t kFirstCopy = 4;

  explicit Vocabulary(size_t copy_tokens = 4);

  size_t size() const { return tokens_.size(); }
  size_t copy_tokens() const { return copy_tokens_; }
  size_t reserved() const { return kFirstCopy + copy_tokens_; }

  // Appends a new token; throws std::invalid_argument on duplicates.
  int32_t add(std::string token, uint64_t count = 0);

  std::optional<int32_t> find(std::string_view token) const;
  // UNK for unknown tokens.
  int32_t id(std::string_view token) const;
  const std::string& token(int32_t id) const;
  uint64_t count(int32_t id) const { return counts_.at(static_cast<size_t>(id)); }
  bool is_copy(int32_t id) const {
    return id >= kFirstCopy && id < static_cast<int32_t>(reserved());
  }

  std::vector<int32_t> encode(std::span<const std::string> tokens) const;
  Tokens decode(std::span<const int32_t> ids) const;

  // FNV-1a over the (id, token) listing; checkpoints record it.
  uint64_t fingerprint() const;

 private:
  size_t copy_tokens_;
  std::vector<std::string> tokens_;
  std::vector<uint64_t> counts_;
  std::unordered_map<std::string, int32_t> ids_;
};

// Builds one vocabulary over all sequences. Tokens from `protected_tokens`
// that occur in the corpus are admitted first; the rest are ranked by
// frequency with lexicographic tie-break until `max_vocab` entries exist.
// Requires max_vocab > reserved ids.
Vocabulary build_vocabulary(std::span<const Tokens> corpora, size_t max_vocab,
                            size_t copy_tokens,
                            const std::set<std::string, std::less<>>& protected_tokens);

// Model vocabulary over training instances: the linearized input and the
// sentence of each, after title delexicalization. Schema slot names, TITLE
// and every slot seen in the inputs are protected.
Vocabulary build_model_vocabulary(std::span<const BiographyInstance> train, size_t max_vocab,
                                  size_t copy_tokens);

}  // namespace factgen

#endif  // FACTGEN_VOCABULARY_H_
