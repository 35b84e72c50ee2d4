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

#include "factgen/vocabulary.h"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace factgen {

Vocabulary::Vocabulary(size_t copy_tokens) : copy_tokens_(copy_tokens) {
  for (std::string_view t : {kPadToken, kGoToken, kEosToken, kUnkToken}) add(std::string(t));
  for (size_t i = 0; i < copy_tokens; ++i) add(copy_token(i));
}

int32_t Vocabulary::add(std::string token, uint64_t count) {
  const auto id = static_cast<int32_t>(tokens_.size());
  if (!ids_.emplace(token, id).second) {
    throw std::invalid_argument("duplicate vocabulary token: " + token);
  }
  tokens_.push_back(std::move(token));
  counts_.push_back(count);
  return id;
}

std::optional<int32_t> Vocabulary::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

int32_t Vocabulary::id(std::string_view token) const { return find(token).value_or(kUnk); }

const std::string& Vocabulary::token(int32_t id) const {
  return tokens_.at(static_cast<size_t>(id));
}

std::vector<int32_t> Vocabulary::encode(std::span<const std::string> tokens) const {
  std::vector<int32_t> ids;
  ids.reserve(tokens.size());
  for (const std::string& t : tokens) ids.push_back(id(t));
  return ids;
}

Tokens Vocabulary::decode(std::span<const int32_t> ids) const {
  Tokens out;
  out.reserve(ids.size());
  for (int32_t i : ids) out.push_back(token(i));
  return out;
}

uint64_t Vocabulary::fingerprint() const {
  uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash ^= c;
      hash *= 0x100000001b3ULL;
    }
  };
  for (size_t i = 0; i < tokens_.size(); ++i) {
    mix(std::to_string(i));
    mix("\t");
    mix(tokens_[i]);
    mix("\n");
  }
  return hash;
}

Vocabulary build_vocabulary(std::span<const Tokens> corpora, size_t max_vocab,
                            size_t copy_tokens,
                            const std::set<std::string, std::less<>>& protected_tokens) {
  Vocabulary vocab(copy_tokens);
  if (max_vocab <= vocab.reserved()) {
    throw std::invalid_argument("max_vocab must exceed the number of reserved tokens");
  }
  std::map<std::string, uint64_t, std::less<>> counts;
  for (const Tokens& sequence : corpora) {
    for (const std::string& token : sequence) {
      if (!vocab.find(token)) ++counts[token];
    }
  }
  std::vector<std::pair<std::string, uint64_t>> ranked(counts.begin(), counts.end());
  // Map order already gives lexicographic ties; protected tokens go first.
  std::stable_sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    const bool pa = protected_tokens.contains(a.first);
    const bool pb = protected_tokens.contains(b.first);
    if (pa != pb) return pa;
    return a.second > b.second;
  });
  for (auto& [token, n] : ranked) {
    if (vocab.size() >= max_vocab) break;
    vocab.add(token, n);
  }
  return vocab;
}

Vocabulary build_model_vocabulary(std::span<const BiographyInstance> train, size_t max_vocab,
                                  size_t copy_tokens) {
  std::set<std::string, std::less<>> slots(default_slot_schema().begin(),
                                           default_slot_schema().end());
  slots.emplace(kTitleSlot);
  std::vector<Tokens> corpora;
  corpora.reserve(2 * train.size());
  for (const BiographyInstance& instance : train) {
    for (const Fact& fact : instance.record.facts) slots.insert(fact.slot);
    BiographyInstance delex = delexicalize_title(instance, copy_tokens);
    corpora.push_back(linearize(delex.record));
    corpora.push_back(std::move(delex.sentence));
  }
  return build_vocabulary(corpora, max_vocab, copy_tokens, slots);
}

}  // namespace factgen
