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

#include "factgen/corpus.h"

#include <gtest/gtest.h>

#include <numeric>

#include "factgen/error.h"
#include "factgen/rng.h"

namespace factgen {
namespace {

BiographyInstance make_instance(std::string id, Tokens title, std::vector<Fact> facts,
                                size_t sentence_len) {
  BiographyInstance instance;
  instance.id = std::move(id);
  instance.record.title = std::move(title);
  instance.record.facts = std::move(facts);
  for (size_t i = 0; i < sentence_len; ++i) instance.sentence.push_back("w" + std::to_string(i));
  return instance;
}

std::vector<Fact> numbered_facts(size_t n) {
  static const std::vector<std::string> slots = {"SEX_OR_GENDER", "DATE_OF_BIRTH", "OCCUPATION",
                                                 "CITIZENSHIP",   "DATE_OF_DEATH", "PLACE_OF_BIRTH",
                                                 "EDUCATED_AT"};
  std::vector<Fact> facts;
  for (size_t i = 0; i < n; ++i) facts.push_back({slots.at(i), {"v" + std::to_string(i)}});
  return facts;
}

TEST(SchemaTest, DefaultSchemaHasFifteenValidUniqueSlots) {
  const auto& schema = default_slot_schema();
  ASSERT_EQ(schema.size(), 15u);
  EXPECT_EQ(schema.front(), "TITLE");
  std::set<std::string> unique(schema.begin(), schema.end());
  EXPECT_EQ(unique.size(), schema.size());
  for (const std::string& slot : schema) EXPECT_TRUE(is_valid_slot_name(slot)) << slot;
}

TEST(SchemaTest, SlotNameValidation) {
  EXPECT_FALSE(is_valid_slot_name(""));
  EXPECT_FALSE(is_valid_slot_name("title"));
  EXPECT_FALSE(is_valid_slot_name("_X"));
  EXPECT_TRUE(is_valid_slot_name("A1_B"));
  EXPECT_EQ(canonical_slot_name("COUNTRY_OF_CITIZENSHIP"), "CITIZENSHIP");
  EXPECT_EQ(canonical_slot_name("OCCUPATION"), "OCCUPATION");
}

TEST(TokenizeTest, Examples) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("Bob Cortner (born 1927)."),
            (Tokens{"bob", "cortner", "(", "born", "1927", ")", "."}));
  EXPECT_EQ(tokenize("16/04/1927"), Tokens{"16/04/1927"});
}

TEST(TokenizeTest, HyphensAndDashes) {
  EXPECT_EQ(tokenize("1985-09-03"), Tokens{"1985-09-03"});
  EXPECT_EQ(tokenize("well-known"), (Tokens{"well", "-", "known"}));
  EXPECT_EQ(tokenize("1927 \xE2\x80\x93 1959"), (Tokens{"1927", "\xE2\x80\x93", "1959"}));
  EXPECT_EQ(tokenize("  a ;b:\"c\"  "), (Tokens{"a", ";", "b", ":", "\"", "c", "\""}));
}

TEST(NormalizeDateTest, SlashFormBecomesIso) {
  EXPECT_EQ(normalize_date("16/04/1927"), "1927-04-16");
  EXPECT_EQ(normalize_date("1927-04-16"), "1927-04-16");
  EXPECT_EQ(normalize_date("1/4/1927"), "1/4/1927");
}

TEST(LinearizeTest, FigureOneRecord) {
  FactRecord record;
  record.title = {"mathias", "tuomi"};
  record.facts = {{"SEX_OR_GENDER", {"male"}},
                  {"DATE_OF_BIRTH", {"1985-09-03"}},
                  {"OCCUPATION", {"squash", "player"}},
                  {"CITIZENSHIP", {"finland"}}};
  EXPECT_EQ(linearize(record),
            (Tokens{"TITLE", "mathias", "tuomi", "SEX_OR_GENDER", "male", "DATE_OF_BIRTH",
                    "1985-09-03", "OCCUPATION", "squash", "player", "CITIZENSHIP", "finland"}));
}

TEST(LinearizeTest, TitleOnlyAndErrors) {
  FactRecord record;
  record.title = {"a"};
  EXPECT_EQ(linearize(record), (Tokens{"TITLE", "a"}));
  record.facts.push_back({"OCCUPATION", {}});
  EXPECT_THROW(linearize(record), DataError);
  EXPECT_THROW(linearize(FactRecord{}), DataError);
}

TEST(LinearizeTest, DelinearizeInverts) {
  const std::set<std::string, std::less<>> slots(default_slot_schema().begin(),
                                                 default_slot_schema().end());
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    FactRecord record;
    record.title = {"t" + std::to_string(rng.below(5))};
    const size_t n = rng.below(6);
    for (size_t i = 0; i < n; ++i) {
      Tokens value;
      for (size_t k = 0; k <= rng.below(3); ++k) value.push_back("v" + std::to_string(rng.below(9)));
      record.facts.push_back({default_slot_schema()[1 + rng.below(14)], value});
    }
    EXPECT_EQ(delinearize(linearize(record), slots), record);
  }
}

TEST(SlotFrequencyTest, OrdersByCountThenName) {
  SlotFrequency table;
  table.add("OCCUPATION", 3);
  table.add("CITIZENSHIP", 5);
  table.add("AWARD_RECEIVED", 3);
  FactRecord record;
  record.title = {"x"};
  record.facts = {{"OCCUPATION", {"a"}},
                  {"AWARD_RECEIVED", {"b"}},
                  {"OCCUPATION", {"c"}},
                  {"CITIZENSHIP", {"d"}}};
  table.order(record);
  std::vector<std::string> slots;
  for (const Fact& f : record.facts) slots.push_back(f.slot + ":" + f.value[0]);
  EXPECT_EQ(slots, (std::vector<std::string>{"CITIZENSHIP:d", "AWARD_RECEIVED:b", "OCCUPATION:a",
                                             "OCCUPATION:c"}));
  EXPECT_EQ(table.top(2), (std::vector<std::string>{"CITIZENSHIP", "AWARD_RECEIVED"}));
}

TEST(PrepareDatasetTest, TenInstancesSplitEightOneOne) {
  std::vector<BiographyInstance> raw;
  for (int i = 0; i < 10; ++i) raw.push_back(make_instance(std::to_string(i), {"t"}, numbered_facts(6), 12));
  const Dataset d = prepare_dataset(raw, DatasetConfig{});
  EXPECT_EQ(d.train.size(), 8u);
  EXPECT_EQ(d.dev.size(), 1u);
  EXPECT_EQ(d.test.size(), 1u);
  EXPECT_EQ(d.stats.kept, 10u);
}

TEST(PrepareDatasetTest, FiltersByFactsAndLength) {
  std::vector<BiographyInstance> raw = {
      make_instance("few", {"t"}, numbered_facts(4), 12),   // 5 facts with TITLE
      make_instance("long", {"t"}, numbered_facts(6), 38),
      make_instance("short", {"t"}, numbered_facts(6), 9),
      make_instance("ok", {"t"}, numbered_facts(5), 37),    // exactly 6 facts
  };
  const Dataset d = prepare_dataset(raw, DatasetConfig{});
  EXPECT_EQ(d.stats.too_few_facts, 1u);
  EXPECT_EQ(d.stats.too_long, 1u);
  EXPECT_EQ(d.stats.too_short, 1u);
  EXPECT_EQ(d.stats.kept, 1u);
  EXPECT_EQ(d.train.size() + d.dev.size() + d.test.size(), 1u);
}

TEST(PrepareDatasetTest, EmptyResultIsAnError) {
  std::vector<BiographyInstance> raw = {make_instance("a", {"t"}, numbered_facts(1), 12)};
  try {
    prepare_dataset(raw, DatasetConfig{});
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("too_few_facts=1"), std::string::npos) << e.what();
  }
}

TEST(PrepareDatasetTest, RestrictsToTopSlots) {
  std::vector<BiographyInstance> raw;
  for (int i = 0; i < 5; ++i) {
    auto facts = numbered_facts(6);
    if (i == 0) facts.push_back({"SPORT", {"chess"}});
    raw.push_back(make_instance(std::to_string(i), {"t"}, facts, 12));
  }
  DatasetConfig config;
  config.top_k_slots = 7;  // TITLE plus the six common slots
  const Dataset d = prepare_dataset(raw, config);
  for (const auto* split : {&d.train, &d.dev, &d.test}) {
    for (const auto& instance : *split) EXPECT_FALSE(instance.record.has("SPORT"));
  }
}

TEST(PrepareDatasetTest, DeterministicAndSplitSizesNearRatios) {
  std::vector<BiographyInstance> raw;
  for (int i = 0; i < 97; ++i) raw.push_back(make_instance(std::to_string(i), {"t"}, numbered_facts(6), 15));
  DatasetConfig config;
  config.split_ratios = {0.7, 0.2, 0.1};
  config.seed = 42;
  const Dataset a = prepare_dataset(raw, config);
  const Dataset b = prepare_dataset(raw, config);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  const std::array<size_t, 3> sizes{a.train.size(), a.dev.size(), a.test.size()};
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_LE(std::abs(static_cast<double>(sizes[i]) - config.split_ratios[i] * 97.0), 1.0);
  }
  EXPECT_EQ(sizes[0] + sizes[1] + sizes[2], 97u);
  config.seed = 43;
  EXPECT_NE(prepare_dataset(raw, config).train, a.train);
}

TEST(DatasetConfigTest, Validation) {
  DatasetConfig config;
  EXPECT_NO_THROW(config.validate());
  config.min_len = 40;
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config = DatasetConfig{};
  config.split_ratios = {0.5, 0.3, 0.3};
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config = DatasetConfig{};
  config.min_facts = 0;
  EXPECT_THROW(config.validate(), std::invalid_argument);
}

TEST(LengthPercentileTest, Examples) {
  std::vector<BiographyInstance> constant(3, make_instance("x", {"t"}, {}, 5));
  EXPECT_EQ(compute_length_percentiles(constant, 0.1, 0.9), (LengthBounds{5, 5}));
  std::vector<BiographyInstance> ramp;
  for (size_t len = 1; len <= 100; ++len) ramp.push_back(make_instance("x", {"t"}, {}, len));
  EXPECT_EQ(compute_length_percentiles(ramp, 0.1, 0.9), (LengthBounds{10, 90}));
  EXPECT_EQ(compute_length_percentiles(ramp, 0.0, 1.0), (LengthBounds{1, 100}));
  EXPECT_THROW(compute_length_percentiles(ramp, 0.9, 0.1), std::invalid_argument);
}

TEST(CopyTokenTest, Inverse) {
  EXPECT_EQ(copy_token(3), "TITLE3");
  EXPECT_EQ(copy_index("TITLE12"), 12u);
  EXPECT_FALSE(copy_index("TITLE").has_value());
  EXPECT_FALSE(copy_index("TITLEx").has_value());
}

TEST(DelexicalizeTest, FigureOneSentence) {
  BiographyInstance instance;
  instance.record.title = {"mathias", "tuomi"};
  instance.sentence = {"mathias", "tuomi", ",", "(", "born", "september", "30", ",", "1985", ")"};
  const BiographyInstance out = delexicalize_title(instance, 4);
  EXPECT_EQ(out.sentence, (Tokens{"TITLE0", "TITLE1", ",", "(", "born", "september", "30", ",",
                                  "1985", ")"}));
  EXPECT_EQ(out.record.title, (Tokens{"TITLE0", "TITLE1"}));
}

TEST(DelexicalizeTest, NoMatchAndBudget) {
  BiographyInstance instance;
  instance.record.title = {"a", "b", "c", "d", "e"};
  instance.sentence = {"x", "e", "d"};
  const BiographyInstance out = delexicalize_title(instance, 4);
  EXPECT_EQ(out.sentence, (Tokens{"x", "e", "TITLE3"}));
  EXPECT_EQ(out.record.title.back(), "e");

  instance.record.title = {"zed"};
  EXPECT_EQ(delexicalize_title(instance, 4).sentence, instance.sentence);
}

TEST(DelexicalizeTest, RepeatedTitleTokenUsesLowestIndex) {
  BiographyInstance instance;
  instance.record.title = {"jan", "van", "jan"};
  instance.sentence = {"jan", "van", "jan", "jan"};
  EXPECT_EQ(delexicalize_title(instance, 4).sentence,
            (Tokens{"TITLE0", "TITLE1", "TITLE0", "TITLE0"}));
}

TEST(RelexicalizeTest, Examples) {
  EXPECT_EQ(relexicalize(Tokens{"TITLE0", "TITLE1", "was", "a", "writer"}, Tokens{"ada", "lovelace"}),
            (Tokens{"ada", "lovelace", "was", "a", "writer"}));
  EXPECT_EQ(relexicalize(Tokens{"<unk>", "(", "born"}, Tokens{"bob", "cortner"}),
            (Tokens{"bob", "(", "born"}));
  EXPECT_EQ(relexicalize(Tokens{"the", "<unk>", "prize"}, Tokens{"bob"}),
            (Tokens{"the", "<unk>", "prize"}));
  EXPECT_EQ(relexicalize(Tokens{"TITLE5", "x"}, Tokens{"bob"}), Tokens{"x"});
}

TEST(RelexicalizeTest, RoundTripsRandomInstances) {
  Rng rng(17);
  const std::vector<std::string> words = {"a", "b", "c", "d", "e", "(", ")", ",", "born", "was"};
  for (int trial = 0; trial < 300; ++trial) {
    BiographyInstance instance;
    for (size_t i = 0, n = 1 + rng.below(4); i < n; ++i) {
      instance.record.title.push_back(words[rng.below(5)]);
    }
    for (size_t i = 0, n = 1 + rng.below(12); i < n; ++i) {
      instance.sentence.push_back(words[rng.below(words.size())]);
    }
    const BiographyInstance delex = delexicalize_title(instance, 4);
    EXPECT_EQ(relexicalize(delex.sentence, instance.record.title), instance.sentence);
  }
}

}  // namespace
}  // namespace factgen
