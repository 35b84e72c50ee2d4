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

#ifndef FACTGEN_TEMPLATE_BASELINE_H_
#define FACTGEN_TEMPLATE_BASELINE_H_

#include <array>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "factgen/corpus.h"

namespace factgen {

struct TemplateRules {
  // True when the indefinite article before `word` is "an".
  std::function<bool(std::string_view word)> takes_an;
  // Citizenship values rendered as "from the X".
  std::set<std::string, std::less<>> the_countries;
  std::array<std::string, 12> month_names;

  static TemplateRules defaults();
};

// A possibly partial ISO date: "1985", "1985-11", "1985-11-12" or with "??"
// placeholders ("1985-??-??").
struct PartialDate {
  int year = 0;
  std::optional<int> month;
  std::optional<int> day;
};

// Throws DataError for a missing year or an out-of-range month or day.
PartialDate parse_iso_date(std::string_view iso);

// "was" when a DATE_OF_DEATH fact is present, otherwise "is".
std::string choose_copula(const FactRecord& record);

std::string choose_determiner(std::string_view next_word, const TemplateRules& rules);

// [day, month, year] without a leading zero on the day, backing off to
// [month, year] or [year] when components are unknown.
Tokens format_date(std::string_view iso, const TemplateRules& rules);

// Fills
//   TITLE , known as GIVEN_NAME , ( born DATE_OF_BIRTH in PLACE_OF_BIRTH ;
//   died DATE_OF_DEATH in PLACE_OF_DEATH ) is a POSITION_HELD and OCCUPATION
//   from CITIZENSHIP .
// dropping each clause whose slot is absent. The died clause needs a death
// date. Only the first value of a repeated slot is used. Throws DataError if
// the record has no title.
Tokens render(const FactRecord& record, const TemplateRules& rules = TemplateRules::defaults());

// Number of distinct slot-level surface patterns render can produce.
size_t template_variation_count();

}  // namespace factgen

#endif  // FACTGEN_TEMPLATE_BASELINE_H_
