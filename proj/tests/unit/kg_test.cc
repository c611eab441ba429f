#include <gtest/gtest.h>

#include "stereokg/config.h"
#include "stereokg/kg.h"
#include "test_support.h"

namespace stereokg {
namespace {

using testing::make_entry;

TEST(Kg, BuildOrdersByEntityAndClusterAndDerivesStrata) {
  std::vector<MinedAssertion> mined(4);
  for (std::size_t i = 0; i < mined.size(); ++i) {
    mined[i].original_text = "sentence " + std::to_string(i);
    mined[i].provenance = {Platform::kReddit, "p" + std::to_string(i)};
  }
  std::vector<SentenceCluster> clusters{{0, "german", 0, {0, 2}},
                                        {1, "german", 1, {1}},
                                        {2, "french", 3, {3}}};
  Representative r0{0, "german", 2, {}};
  r0.triple.subject = "germans";
  r0.triple.predicate = "are";
  r0.triple.object = "punctual";
  Representative r2{2, "french", 1, {}};
  r2.triple.subject = "the french";
  r2.triple.predicate = "love";
  r2.triple.object = "wine";
  BuildReport report;
  const auto kg = build_kg(mined, clusters, {r0, r2}, &report);
  ASSERT_EQ(kg.size(), 2u);
  EXPECT_EQ(report.unrepresentable, 1u);
  EXPECT_EQ(kg[0].entity_id, "french");
  EXPECT_EQ(kg[0].entry_id, 0);
  EXPECT_EQ(kg[0].derivation, Derivation::kSingletonDerived);
  EXPECT_EQ(kg[1].entry_id, 1);
  EXPECT_EQ(kg[1].derivation, Derivation::kClusterDerived);
  EXPECT_EQ(kg[1].member_sentences, (std::vector<std::string>{"sentence 0", "sentence 2"}));
  EXPECT_EQ(kg[1].provenance.size(), 2u);
  const KgStats s = stats(kg);
  EXPECT_EQ(s.total, 2);
  EXPECT_EQ(s.per_entity_counts.at("german"), 1);

  clusters[1].members = {9};
  EXPECT_THROW(build_kg(mined, clusters, {r0, {1, "german", 1, r0.triple}}, nullptr), DataError);
}

TEST(Kg, FormatParseRoundTrip) {
  std::vector<KgEntry> kg{make_entry(0, "german", "germans", "are", "punctual", 3),
                          make_entry(1, "french", "the french", "love", "wine")};
  kg[0].triple.score = 0.75;
  EXPECT_EQ(parse_kg(format_kg(kg)), kg);
  testing::TempDir dir;
  save_kg(kg, dir / "kg.jsonl");
  EXPECT_EQ(load_kg(dir / "kg.jsonl"), kg);
  EXPECT_EQ(format_kg_tsv(kg),
            "entity\tsubject\tpredicate\tobject\tmember_count\n"
            "german\tgermans\tare\tpunctual\t3\n"
            "french\tthe french\tlove\twine\t1\n");
}

TEST(Kg, HeaderAndVersionAreChecked) {
  EXPECT_THROW(parse_kg(""), DataError);
  EXPECT_THROW(parse_kg("{\"format\":\"other\",\"version\":1}\n"), DataError);
  EXPECT_THROW(parse_kg("{\"format\":\"stereokg\",\"version\":2}\n"), DataError);
  EXPECT_TRUE(parse_kg("{\"format\":\"stereokg\",\"version\":1}\n").empty());
}

TEST(Kg, EntryValidation) {
  KgEntry e = make_entry(4, "german", "germans", "are", "punctual", 2);
  e.member_sentences.pop_back();
  EXPECT_THROW(validate_entry(e), DataError);
  e = make_entry(4, "german", "germans", "are", "punctual", 2);
  e.derivation = Derivation::kSingletonDerived;
  EXPECT_THROW(validate_entry(e), DataError);
  e = make_entry(4, "german", "germans", "are", "");
  EXPECT_THROW(validate_entry(e), DataError);
  e = make_entry(4, "german", "germans", "are", "punctual");
  e.triple.score = 1.5;
  EXPECT_THROW(validate_entry(e), DataError);

  const PipelineConfig c = default_config();
  KgValidation v{&c.entities, FilterLexicons::from_params(c.extraction)};
  EXPECT_NO_THROW(validate_entry(make_entry(1, "german", "germans", "are", "punctual"), &v));
  EXPECT_THROW(validate_entry(make_entry(1, "german", "germans", "are", "so punctual"), &v),
               DataError);
  EXPECT_THROW(validate_entry(make_entry(1, "german", "they", "are", "punctual"), &v), DataError);
  EXPECT_THROW(validate_entry(make_entry(1, "martian", "germans", "are", "punctual"), &v),
               DataError);
  try {
    validate_entry(make_entry(17, "german", "germans", "are", "so punctual"), &v);
  } catch (const DataError &err) {
    EXPECT_NE(std::string(err.what()).find("17"), std::string::npos);
  }
}

}  // namespace
}  // namespace stereokg
