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

#include "factgen/template_baseline.h"

#include <charconv>
#include <set>

#include "factgen/error.h"

namespace factgen {
namespace {

std::optional<int> parse_component(std::string_view text) {
  if (text.empty() || text.find('?') != std::string_view::npos) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("malformed date component '" + std::string(text) + "'");
  }
  return value;
}

void append(Tokens& out, std::span<const std::string> tokens) {
  out.insert(out.end(), tokens.begin(), tokens.end());
}

// Value tokens for a slot, or nullptr when absent.
const Tokens* value_of(const FactRecord& record, std::string_view slot) {
  const Fact* fact = record.find(slot);
  return fact == nullptr ? nullptr : &fact->value;
}

Tokens render_date(const Tokens& value, const TemplateRules& rules) {
  if (value.size() == 1) {
    try {
      return format_date(value.front(), rules);
    } catch (const DataError&) {
      // Not a date we understand; emit it verbatim.
    }
  }
  return value;
}

}  // namespace

TemplateRules TemplateRules::defaults() {
  TemplateRules rules;
  rules.takes_an = [](std::string_view word) {
    if (word.empty()) return false;
    switch (word.front()) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return true;
      default:
        return false;
    }
  };
  rules.the_countries = {"united states of america", "united kingdom", "netherlands",
                         "philippines"};
  rules.month_names = {"january", "february", "march",     "april",   "may",      "june",
                       "july",    "august",   "september", "october", "november", "december"};
  return rules;
}

PartialDate parse_iso_date(std::string_view iso) {
  PartialDate date;
  const size_t first = iso.find('-');
  auto year = parse_component(iso.substr(0, first));
  if (!year) throw DataError("date without a year: '" + std::string(iso) + "'");
  date.year = *year;
  if (first != std::string_view::npos) {
    std::string_view rest = iso.substr(first + 1);
    const size_t second = rest.find('-');
    date.month = parse_component(rest.substr(0, second));
    if (second != std::string_view::npos) date.day = parse_component(rest.substr(second + 1));
  }
  if (date.month && (*date.month < 1 || *date.month > 12)) {
    throw DataError("invalid month in '" + std::string(iso) + "'");
  }
  if (date.day && (*date.day < 1 || *date.day > 31)) {
    throw DataError("invalid day in '" + std::string(iso) + "'");
  }
  return date;
}

std::string choose_copula(const FactRecord& record) {
  return record.has("DATE_OF_DEATH") ? "was" : "is";
}

std::string choose_determiner(std::string_view next_word, const TemplateRules& rules) {
  return rules.takes_an(next_word) ? "an" : "a";
}

Tokens format_date(std::string_view iso, const TemplateRules& rules) {
  const PartialDate date = parse_iso_date(iso);
  Tokens out;
  if (date.month) {
    if (date.day) out.push_back(std::to_string(*date.day));
    out.push_back(rules.month_names[static_cast<size_t>(*date.month - 1)]);
  }
  out.push_back(std::to_string(date.year));
  return out;
}

Tokens render(const FactRecord& record, const TemplateRules& rules) {
  if (record.title.empty()) throw DataError("cannot render a record without a title");
  Tokens words = record.title;

  if (const Tokens* given = value_of(record, "GIVEN_NAME")) {
    words.insert(words.end(), {",", "known", "as"});
    append(words, *given);
    words.emplace_back(",");
  }

  Tokens born;
  if (const Tokens* date = value_of(record, "DATE_OF_BIRTH")) append(born, render_date(*date, rules));
  if (const Tokens* place = value_of(record, "PLACE_OF_BIRTH")) {
    born.emplace_back("in");
    append(born, *place);
  }
  Tokens died;
  if (const Tokens* date = value_of(record, "DATE_OF_DEATH")) {
    append(died, render_date(*date, rules));
    if (const Tokens* place = value_of(record, "PLACE_OF_DEATH")) {
      died.emplace_back("in");
      append(died, *place);
    }
  }
  if (!born.empty() || !died.empty()) {
    words.emplace_back("(");
    if (!born.empty()) {
      words.emplace_back("born");
      append(words, born);
    }
    if (!born.empty() && !died.empty()) words.emplace_back(";");
    if (!died.empty()) {
      words.emplace_back("died");
      append(words, died);
    }
    words.emplace_back(")");
  }

  Tokens predicate;
  const Tokens* position = value_of(record, "POSITION_HELD");
  const Tokens* occupation = value_of(record, "OCCUPATION");
  if (position) append(predicate, *position);
  if (position && occupation) predicate.emplace_back("and");
  if (occupation) append(predicate, *occupation);
  const Tokens* citizenship = value_of(record, "CITIZENSHIP");

  if (!predicate.empty() || citizenship) {
    words.push_back(choose_copula(record));
    if (!predicate.empty()) {
      words.push_back(choose_determiner(predicate.front(), rules));
      append(words, predicate);
    }
    if (citizenship) {
      words.emplace_back("from");
      if (rules.the_countries.contains(join(*citizenship))) words.emplace_back("the");
      append(words, *citizenship);
    }
  }
  words.emplace_back(".");
  return tokenize(join(words));
}

size_t template_variation_count() {
  static const std::array<std::string, 8> kSlots = {
      "GIVEN_NAME",     "DATE_OF_BIRTH", "PLACE_OF_BIRTH", "DATE_OF_DEATH",
      "PLACE_OF_DEATH", "POSITION_HELD", "OCCUPATION",     "CITIZENSHIP"};
  std::set<std::string> patterns;
  for (unsigned mask = 0; mask < (1u << kSlots.size()); ++mask) {
    FactRecord record;
    record.title = {"TITLE_VALUE"};
    for (size_t i = 0; i < kSlots.size(); ++i) {
      if (!(mask & (1u << i))) continue;
      // Dates as placeholders keep the pattern independent of date precision.
      record.facts.push_back(Fact{kSlots[i], {kSlots[i] + "_VALUE"}});
    }
    patterns.insert(join(render(record)));
  }
  return patterns.size();
}

}  // namespace factgen
