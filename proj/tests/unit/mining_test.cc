#include <gtest/gtest.h>

#include <algorithm>
#include <tuple>

#include "stereokg/config.h"
#include "stereokg/ingest.h"
#include "stereokg/io.h"
#include "stereokg/mining.h"
#include "test_support.h"

namespace stereokg {
namespace {

const QueryTemplate &find_template(const PipelineConfig &c, const std::string &pattern) {
  for (const auto &t : c.templates) {
    if (t.pattern == pattern) return t;
  }
  throw std::runtime_error("no template " + pattern);
}

TEST(Mining, SplitSentences) {
  const auto s = split_sentences("Why are Germans tall?? They are.\nAnd so!  last bit");
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0], "Why are Germans tall??");
  EXPECT_EQ(s[1], "They are.");
  EXPECT_EQ(s[2], "And so!");
  EXPECT_EQ(s[3], "last bit");
}

TEST(Mining, QuestionTemplatesAnchorAtSentenceStart) {
  const PipelineConfig c = default_config();
  const auto &why_are = find_template(c, "Why are <SUB>");
  const auto &german = c.entity("german");
  EXPECT_TRUE(match_template("Why are Germans tall?", why_are, german));
  EXPECT_FALSE(match_template("I wonder why are Germans tall?", why_are, german));
  EXPECT_FALSE(match_template("Why are Germanic tribes tall?", why_are, german));
  const auto m = match_template("why are GERMANS tall", why_are, german);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->surface_form, "germans");

  const auto &are_so = find_template(c, "<SUB> are so");
  EXPECT_TRUE(match_template("Honestly Germans are so tall.", are_so, german));
}

TEST(Mining, HandConvertedQuestions) {
  const PipelineConfig c = default_config();
  const auto rows = testing::read_tsv_fixture("questions_20.tsv");
  ASSERT_EQ(rows.size(), 20u);
  for (const auto &row : rows) {
    ASSERT_EQ(row.size(), 4u);
    const auto &tmpl = find_template(c, row[1]);
    EXPECT_EQ(to_statement(row[2], tmpl, c.entity(row[0])), row[3]) << row[2];
  }
}

TEST(Mining, StatementTemplatesAreLowercasedOnly) {
  const PipelineConfig c = default_config();
  EXPECT_EQ(to_statement("Germans are so punctual!", find_template(c, "<SUB> are so"),
                         c.entity("german")),
            "germans are so punctual");
}

TEST(Mining, ConversionFailures) {
  const PipelineConfig c = default_config();
  EXPECT_THROW(to_statement("Why are Germans?", find_template(c, "Why are <SUB>"),
                            c.entity("german")),
               ConversionFailed);
  EXPECT_THROW(to_statement("Why is the sky blue?", find_template(c, "Why is <SUB>"),
                            c.entity("german")),
               ConversionFailed);
}

using Key = std::tuple<std::string, std::string, std::string>;

std::vector<Key> expected_mined() {
  std::vector<Key> out;
  for (const auto &line : io::read_lines(testing::fixture_path("posts_200_expected_mined.jsonl"))) {
    if (line.empty()) continue;
    const auto j = io::Json::parse(line);
    out.emplace_back(j.at("source_id"), j.at("entity"), j.at("statement"));
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Mining, FixtureMatchesHandCount) {
  const PipelineConfig c = default_config();
  const DumpContents dump = load_dump(testing::fixture_path("posts_200.jsonl"));
  const auto kept = apply_allowlist(dump.posts, c).kept;
  MiningReport report;
  const auto mined = mine(kept, c.entities, c.templates, &report);
  std::vector<Key> got;
  for (const auto &a : mined) {
    got.emplace_back(a.provenance.source_id, a.entity_id, a.statement_text);
  }
  std::sort(got.begin(), got.end());
  const auto expected = expected_mined();
  EXPECT_EQ(expected.size(), 198u);
  EXPECT_EQ(got, expected);
  EXPECT_EQ(report.matches, mined.size() + report.conversion_failed + report.duplicates_in_post);
}

TEST(Mining, OutputIndependentOfChunking) {
  const PipelineConfig c = default_config();
  const auto posts = load_dump(testing::fixture_path("posts_200.jsonl")).posts;
  const auto whole = mine(posts, c.entities, c.templates);
  testing::Gen gen(5);
  for (int round = 0; round < 5; ++round) {
    std::vector<MinedAssertion> pieces;
    std::size_t start = 0;
    while (start < posts.size()) {
      const std::size_t len = static_cast<std::size_t>(gen.integer(1, 40));
      const std::size_t end = std::min(posts.size(), start + len);
      const std::vector<RawPost> chunk(posts.begin() + start, posts.begin() + end);
      auto part = mine(chunk, c.entities, c.templates);
      pieces.insert(pieces.end(), part.begin(), part.end());
      start = end;
    }
    std::stable_sort(pieces.begin(), pieces.end(), [](const auto &a, const auto &b) {
      return std::tie(a.provenance, a.entity_id, a.statement_text) <
             std::tie(b.provenance, b.entity_id, b.statement_text);
    });
    EXPECT_EQ(pieces, whole);
  }
}

TEST(Mining, FormatParseRoundTrip) {
  const PipelineConfig c = default_config();
  const auto posts = load_dump(testing::fixture_path("posts_200.jsonl")).posts;
  const auto mined = mine(posts, c.entities, c.templates);
  EXPECT_EQ(parse_mined(format_mined(mined), c.templates), mined);
  EXPECT_THROW(parse_mined("{\"entity\": 1}\n", c.templates), DataError);
}

}  // namespace
}  // namespace stereokg
