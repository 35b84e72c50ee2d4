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

#include "factgen/ngram_lm.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "factgen/error.h"

namespace factgen {
namespace {

constexpr int32_t kStartId = 0;
constexpr int32_t kEndId = 1;
constexpr int32_t kUnkId = 2;
constexpr double kFallbackDiscount = 0.75;
constexpr double kLog10Zero = -99.0;

std::string make_key(std::span<const int32_t> ids) {
  std::string key(ids.size() * sizeof(int32_t), '\0');
  if (!ids.empty()) std::memcpy(key.data(), ids.data(), key.size());
  return key;
}

std::vector<int32_t> split_key(const std::string& key) {
  std::vector<int32_t> ids(key.size() / sizeof(int32_t));
  if (!ids.empty()) std::memcpy(ids.data(), key.data(), key.size());
  return ids;
}

int32_t first_id(const std::string& key) {
  int32_t id = 0;
  std::memcpy(&id, key.data(), sizeof(int32_t));
  return id;
}

// Counts for one context: total mass and how many continuations have
// adjusted count 1, 2 and 3+.
struct ContextStats {
  double total = 0.0;
  std::array<double, 3> buckets{};
};

double discount_for(const Discounts& d, uint64_t count) {
  if (count == 0) return 0.0;
  if (count == 1) return d.d1;
  if (count == 2) return d.d2;
  return d.d3;
}

Discounts estimate_discounts(const std::unordered_map<std::string, uint64_t>& counts, int order,
                             std::vector<std::string>* warnings) {
  std::array<double, 5> n{};
  for (const auto& [key, c] : counts) {
    if (c >= 1 && c <= 4) n[c] += 1.0;
  }
  Discounts d;
  bool valid = n[1] > 0 && n[2] > 0 && n[3] > 0;
  if (valid) {
    const double y = n[1] / (n[1] + 2.0 * n[2]);
    d.d1 = 1.0 - 2.0 * y * n[2] / n[1];
    d.d2 = 2.0 - 3.0 * y * n[3] / n[2];
    d.d3 = 3.0 - 4.0 * y * n[4] / n[3];
    valid = d.d1 > 0.0 && d.d1 <= 1.0 && d.d2 > 0.0 && d.d2 <= 2.0 && d.d3 > 0.0 && d.d3 <= 3.0;
  }
  if (!valid) {
    d = Discounts{kFallbackDiscount, kFallbackDiscount, kFallbackDiscount, true};
    if (warnings != nullptr) {
      std::ostringstream msg;
      msg << "order " << order << ": degenerate count-of-counts (n1=" << n[1] << " n2=" << n[2]
          << " n3=" << n[3] << " n4=" << n[4] << "), using absolute discount "
          << kFallbackDiscount;
      warnings->push_back(msg.str());
    }
  }
  return d;
}

}  // namespace

std::string_view to_string(TemplatingScheme scheme) {
  switch (scheme) {
    case TemplatingScheme::kNone: return "none";
    case TemplatingScheme::kTitle: return "title";
    case TemplatingScheme::kFull: return "full";
  }
  return "none";
}

std::optional<TemplatingScheme> parse_scheme(std::string_view name) {
  if (name == "none" || name == "NONE") return TemplatingScheme::kNone;
  if (name == "title" || name == "TITLE") return TemplatingScheme::kTitle;
  if (name == "full" || name == "FULL") return TemplatingScheme::kFull;
  return std::nullopt;
}

Tokens apply_scheme(const BiographyInstance& instance, TemplatingScheme scheme) {
  if (scheme == TemplatingScheme::kNone) return instance.sentence;
  std::vector<const Fact*> facts;
  const Fact title{std::string(kTitleSlot), instance.record.title};
  facts.push_back(&title);
  if (scheme == TemplatingScheme::kFull) {
    for (const Fact& f : instance.record.facts) facts.push_back(&f);
  }
  Tokens out = instance.sentence;
  for (std::string& token : out) {
    bool done = false;
    for (const Fact* fact : facts) {
      for (size_t j = 0; j < fact->value.size() && !done; ++j) {
        if (fact->value[j] == token) {
          token = fact->slot + "_" + std::to_string(j);
          done = true;
        }
      }
      if (done) break;
    }
  }
  return out;
}

int32_t NGramModel::intern(std::string_view token) {
  auto [it, inserted] = ids_.emplace(std::string(token), static_cast<int32_t>(tokens_.size()));
  if (inserted) tokens_.emplace_back(token);
  return it->second;
}

int32_t NGramModel::lookup(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end() || it->second == kStartId) return kUnkId;
  return it->second;
}

NGramModel NGramModel::train(std::span<const Tokens> sentences, int order,
                             std::vector<std::string>* warnings) {
  if (order < 2) throw std::invalid_argument("n-gram order must be at least 2");
  if (sentences.empty()) throw DataError("cannot train a language model on an empty corpus");

  NGramModel model;
  model.order_ = order;
  model.intern(kSentenceStart);
  model.intern(kSentenceEnd);
  model.intern(kUnkToken);

  const auto n = static_cast<size_t>(order);
  // raw[k-1]: counts of k-grams as they occur in the padded text.
  std::vector<std::unordered_map<std::string, uint64_t>> raw(n);
  std::vector<int32_t> padded;
  for (const Tokens& sentence : sentences) {
    padded.assign(1, kStartId);
    for (const std::string& token : sentence) padded.push_back(model.intern(token));
    padded.push_back(kEndId);
    for (size_t k = 1; k <= n; ++k) {
      for (size_t i = 0; i + k <= padded.size(); ++i) {
        if (k == 1 && i == 0) continue;  // <s> is never predicted
        ++raw[k - 1][make_key(std::span(padded).subspan(i, k))];
      }
    }
  }
  model.vocab_size_ = model.tokens_.size() - 1;

  // Adjusted counts: raw for the highest order and for n-grams starting with
  // <s>; otherwise the number of distinct left extensions.
  std::vector<std::unordered_map<std::string, uint64_t>> adjusted(n);
  adjusted[n - 1] = raw[n - 1];
  for (size_t k = n - 1; k >= 1; --k) {
    auto& table = adjusted[k - 1];
    for (const auto& [key, c] : raw[k - 1]) {
      if (first_id(key) == kStartId) table[key] = c;
    }
    for (const auto& [key, c] : raw[k]) ++table[key.substr(sizeof(int32_t))];
  }

  model.discounts_.resize(n);
  model.probs_.assign(n, {});
  model.weights_.assign(n, {});
  for (size_t k = 1; k <= n; ++k) {
    const Discounts& d = model.discounts_[k - 1] =
        estimate_discounts(adjusted[k - 1], static_cast<int>(k), warnings);

    std::unordered_map<std::string, ContextStats> contexts;
    for (const auto& [key, c] : adjusted[k - 1]) {
      ContextStats& stats = contexts[key.substr(0, (k - 1) * sizeof(int32_t))];
      stats.total += static_cast<double>(c);
      stats.buckets[std::min<uint64_t>(c, 3) - 1] += 1.0;
    }
    for (const auto& [context, stats] : contexts) {
      model.weights_[k - 1][context] =
          (d.d1 * stats.buckets[0] + d.d2 * stats.buckets[1] + d.d3 * stats.buckets[2]) /
          stats.total;
    }

    if (k == 1) {
      const ContextStats& stats = contexts.at(std::string());
      const double uniform = 1.0 / static_cast<double>(model.vocab_size_);
      const double gamma = model.weights_[0].at(std::string());
      for (int32_t id = 1; id < static_cast<int32_t>(model.tokens_.size()); ++id) {
        const std::string key = make_key(std::span(&id, 1));
        auto it = adjusted[0].find(key);
        const uint64_t c = it == adjusted[0].end() ? 0 : it->second;
        model.probs_[0][key] =
            (static_cast<double>(c) - discount_for(d, c)) / stats.total + gamma * uniform;
      }
      continue;
    }

    auto& probs = model.probs_[k - 1];
    for (const auto& [key, c] : adjusted[k - 1]) {
      const std::vector<int32_t> ids = split_key(key);
      const std::string context = key.substr(0, (k - 1) * sizeof(int32_t));
      const ContextStats& stats = contexts.at(context);
      const double lower = model.score(std::span(ids).subspan(1, k - 2), ids.back());
      probs[key] = (static_cast<double>(c) - discount_for(d, c)) / stats.total +
                   model.weights_[k - 1].at(context) * lower;
    }
  }
  return model;
}

double NGramModel::score(std::span<const int32_t> context, int32_t word) const {
  double backoff = 1.0;
  std::vector<int32_t> key(context.begin(), context.end());
  key.push_back(word);
  for (size_t m = context.size();; --m) {
    const std::span<const int32_t> gram = std::span(key).subspan(context.size() - m);
    if (m < probs_.size()) {
      const auto& table = probs_[m];
      auto it = table.find(make_key(gram));
      if (it != table.end()) return backoff * it->second;
    }
    if (m == 0) break;
    auto w = weights_[m].find(make_key(gram.first(m)));
    if (w != weights_[m].end()) backoff *= w->second;
  }
  // Every vocabulary word has a unigram entry; only <s> lands here.
  return 0.0;
}

double NGramModel::prob(std::span<const std::string> context, std::string_view word) const {
  const size_t keep = std::min(context.size(), static_cast<size_t>(order_ - 1));
  std::vector<int32_t> ids;
  ids.reserve(keep);
  for (const std::string& token : context.last(keep)) {
    ids.push_back(token == kSentenceStart ? kStartId : lookup(token));
  }
  return score(ids, lookup(word));
}

double NGramModel::log_prob(std::span<const std::string> context, std::string_view word) const {
  return std::log(prob(context, word));
}

std::vector<std::string> NGramModel::vocabulary() const {
  return {tokens_.begin() + 1, tokens_.end()};
}

void NGramModel::save(std::ostream& out) const {
  out << "# factgen n-gram model: interpolated modified Kneser-Ney\n";
  out << "# entry columns: order, tokens, log10 probability, log10 interpolation weight\n";
  for (const auto& [key, value] : metadata) out << "meta\t" << key << "\t" << value << "\n";
  out << "order\t" << order_ << "\n";
  out << "vocab\t" << vocab_size_ << "\n";
  out << std::setprecision(17);
  for (size_t k = 0; k < discounts_.size(); ++k) {
    const Discounts& d = discounts_[k];
    out << "discount\t" << k + 1 << "\t" << d.d1 << "\t" << d.d2 << "\t" << d.d3 << "\t"
        << (d.fallback ? 1 : 0) << "\n";
  }
  auto text = [this](const std::string& key) {
    std::string s;
    for (int32_t id : split_key(key)) {
      if (!s.empty()) s += ' ';
      s += tokens_[static_cast<size_t>(id)];
    }
    return s;
  };
  for (size_t k = 1; k <= static_cast<size_t>(order_); ++k) {
    std::vector<std::pair<std::string, std::string>> entries;  // text, key
    for (const auto& [key, p] : probs_[k - 1]) entries.emplace_back(text(key), key);
    if (k < weights_.size()) {
      for (const auto& [key, w] : weights_[k]) {
        if (!probs_[k - 1].contains(key)) entries.emplace_back(text(key), key);
      }
    }
    std::sort(entries.begin(), entries.end());
    out << "ngrams\t" << k << "\t" << entries.size() << "\n";
    for (const auto& [words, key] : entries) {
      auto p = probs_[k - 1].find(key);
      const double log_p = p == probs_[k - 1].end() ? kLog10Zero : std::log10(p->second);
      double log_w = 0.0;
      if (k < weights_.size()) {
        auto w = weights_[k].find(key);
        if (w != weights_[k].end()) log_w = std::log10(w->second);
      }
      out << k << "\t" << words << "\t" << log_p << "\t" << log_w << "\n";
    }
  }
}

NGramModel NGramModel::load(std::istream& in) {
  NGramModel model;
  model.intern(kSentenceStart);
  model.intern(kSentenceEnd);
  model.intern(kUnkToken);
  std::string line;
  size_t line_no = 0;
  auto fail = [&line_no](const std::string& what) {
    throw DataError("n-gram model line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::istringstream split(line);
    for (std::string f; std::getline(split, f, '\t');) fields.push_back(f);
    const std::string& tag = fields.front();
    if (tag == "meta" && fields.size() == 3) {
      model.metadata[fields[1]] = fields[2];
    } else if (tag == "order" && fields.size() == 2) {
      model.order_ = std::stoi(fields[1]);
      if (model.order_ < 2) fail("bad order");
      const auto n = static_cast<size_t>(model.order_);
      model.discounts_.assign(n, {});
      model.probs_.assign(n, {});
      model.weights_.assign(n, {});
    } else if (tag == "vocab" && fields.size() == 2) {
      model.vocab_size_ = std::stoul(fields[1]);
    } else if (tag == "discount" && fields.size() == 6) {
      const size_t k = std::stoul(fields[1]);
      if (k < 1 || k > model.discounts_.size()) fail("discount order out of range");
      model.discounts_[k - 1] =
          Discounts{std::stod(fields[2]), std::stod(fields[3]), std::stod(fields[4]),
                    fields[5] == "1"};
    } else if (tag == "ngrams") {
      continue;
    } else if (fields.size() == 4) {
      const size_t k = std::stoul(fields[0]);
      if (k < 1 || k > model.probs_.size()) fail("n-gram order out of range");
      std::vector<int32_t> ids;
      std::istringstream words(fields[1]);
      for (std::string w; words >> w;) ids.push_back(model.intern(w));
      if (ids.size() != k) fail("n-gram length does not match its order");
      const std::string key = make_key(ids);
      const double log_p = std::stod(fields[2]);
      const double log_w = std::stod(fields[3]);
      if (log_p > kLog10Zero) model.probs_[k - 1][key] = std::pow(10.0, log_p);
      if (k < model.weights_.size()) model.weights_[k][key] = std::pow(10.0, log_w);
    } else {
      fail("unrecognized entry");
    }
  }
  if (model.order_ == 0) throw DataError("n-gram model has no order line");
  if (model.probs_.front().empty()) throw DataError("n-gram model has no unigrams");
  return model;
}

double perplexity(const NGramModel& model, std::span<const Tokens> sentences) {
  double log_sum = 0.0;
  size_t scored = 0;
  Tokens context;
  for (const Tokens& sentence : sentences) {
    context.assign(1, std::string(kSentenceStart));
    for (const std::string& token : sentence) {
      log_sum += model.log_prob(context, token);
      context.push_back(token);
      ++scored;
    }
    log_sum += model.log_prob(context, kSentenceEnd);
    ++scored;
  }
  if (scored == 0) throw DataError("no tokens to score");
  return std::exp(-log_sum / static_cast<double>(scored));
}

}  // namespace factgen
