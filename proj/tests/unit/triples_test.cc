#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <memory>

#include "stereokg/config.h"
#include "stereokg/text.h"
#include "stereokg/triples.h"
#include "test_support.h"

namespace stereokg {
namespace {

Triple T(std::string s, std::string p, std::string o) {
  Triple t;
  t.subject = std::move(s);
  t.predicate = std::move(p);
  t.object = std::move(o);
  return t;
}

std::string key(const Triple &t) { return t.subject + "|" + t.predicate + "|" + t.object; }

class FilterTest : public ::testing::Test {
 protected:
  PipelineConfig config_ = default_config();
  FilterLexicons lex_ = FilterLexicons::from_params(config_.extraction);
};

TEST_F(FilterTest, PersonalPronounTriplesAreDropped) {
  FilterReport r;
  EXPECT_FALSE(filter_one(T("i", "think", "germans are tall"), config_.entity("german"), lex_, &r));
  EXPECT_FALSE(filter_one(T("germans", "like", "him"), config_.entity("german"), lex_, &r));
  EXPECT_FALSE(filter_one(T("He", "is", "a german"), config_.entity("german"), lex_, &r));
  EXPECT_EQ(r.dropped_pronoun, 3u);
}

TEST_F(FilterTest, TriplesWithoutTheSubjectEntityAreDropped) {
  FilterReport r;
  EXPECT_FALSE(filter_one(T("people", "hate", "the french"), config_.entity("french"), lex_, &r));
  EXPECT_FALSE(filter_one(T("the sky", "is", "blue"), config_.entity("french"), lex_, &r));
  EXPECT_EQ(r.dropped_no_entity, 2u);
}

TEST_F(FilterTest, ColloquialismsAndModalitiesAreRemoved) {
  const auto kept =
      filter_one(T("americans", "really love", "guns lol"), config_.entity("american"), lex_);
  ASSERT_TRUE(kept);
  EXPECT_EQ(key(*kept), "americans|love|guns");
  const auto upper = filter_one(T("Americans", "REALLY love", "guns LOL!"),
                                config_.entity("american"), lex_);
  ASSERT_TRUE(upper);
  EXPECT_EQ(key(*upper), "Americans|love|guns");
  FilterReport r;
  EXPECT_FALSE(filter_one(T("germans", "are", "really lol"), config_.entity("german"), lex_, &r));
  EXPECT_EQ(r.dropped_emptied, 1u);
}

TEST_F(FilterTest, HandLabelledFixture) {
  const auto rows = testing::read_tsv_fixture("filter_30.tsv");
  ASSERT_EQ(rows.size(), 30u);
  int agree = 0;
  for (const auto &row : rows) {
    ASSERT_EQ(row.size(), 5u);
    const auto got = filter_one(T(row[1], row[2], row[3]), config_.entity(row[0]), lex_);
    const std::string actual = got ? key(*got) : "DROP";
    EXPECT_EQ(actual, row[4]) << row[1] << " | " << row[2] << " | " << row[3];
    agree += actual == row[4];
  }
  EXPECT_EQ(agree, 30);
}

TEST_F(FilterTest, FilterIsIdempotent) {
  for (const auto &row : testing::read_tsv_fixture("filter_30.tsv")) {
    const auto &entity = config_.entity(row[0]);
    const auto once = filter_one(T(row[1], row[2], row[3]), entity, lex_);
    if (!once) continue;
    const auto twice = filter_one(*once, entity, lex_);
    ASSERT_TRUE(twice);
    EXPECT_EQ(key(*twice), key(*once));
  }
}

TEST(Extract, HandLabelledFixture) {
  const PipelineConfig config = default_config();
  const auto rows = testing::read_tsv_fixture("extractor_30.tsv");
  ASSERT_EQ(rows.size(), 30u);
  for (const auto &row : rows) {
    std::vector<std::string> expected;
    if (row.size() > 2 && !row[2].empty()) {
      std::size_t start = 0;
      while (true) {
        std::size_t semi = row[2].find(';', start);
        expected.push_back(row[2].substr(start, semi - start));
        if (semi == std::string::npos) break;
        start = semi + 1;
      }
    }
    std::vector<std::string> got;
    for (const auto &t : extract(row[1], config.entity(row[0]), 7)) {
      got.push_back(key(t));
      EXPECT_EQ(t.source_assertion, 7u);
    }
    EXPECT_EQ(got, expected) << row[1];
  }
}

TEST(Extract, ExternalCandidatesAreAppended) {
  class Fixed : public ExternalExtractor {
   public:
    std::vector<TripleText> extract(std::string_view) override {
      return {{"germans", "drink", "beer"}, {"", "x", "y"}};
    }
  };
  Fixed ext;
  const auto out = extract("germans love beer", default_config().entity("german"), 0, &ext);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(key(out[0]), "germans|love|beer");
  EXPECT_EQ(key(out[1]), "germans|drink|beer");
}

// Reference choice: the highest score wins; ties go to fewer tokens, then to
// the lexicographically smallest (subject, predicate, object).
std::size_t reference_pick(const std::vector<Triple> &c, const std::vector<double> &s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (s[i] != s[best]) {
      if (s[i] > s[best]) best = i;
      continue;
    }
    const auto ti = c[i].token_count(), tb = c[best].token_count();
    if (ti != tb) {
      if (ti < tb) best = i;
      continue;
    }
    if (std::tie(c[i].subject, c[i].predicate, c[i].object) <
        std::tie(c[best].subject, c[best].predicate, c[best].object)) {
      best = i;
    }
  }
  return best;
}

TEST(Representative, EnumeratedScoreTables) {
  const std::vector<Triple> candidates{
      T("germans", "are", "punctual"), T("germans", "are", "very punctual"),
      T("german people", "are", "punctual"), T("germans", "are", "always on time")};
  const std::vector<double> levels{0.1, 0.5, 0.9};
  const std::vector<std::function<double(double)>> monotone{
      [](double x) { return x * x * x; }, [](double x) { return 3.0 * x + 2.0; },
      [](double x) { return std::log(x); }, [](double x) { return 1.0 / (1.0 + std::exp(-x)); }};
  int tables = 0;
  for (int code = 0; code < 81; ++code) {
    std::vector<double> scores;
    for (int c = code, k = 0; k < 4; ++k, c /= 3) scores.push_back(levels[c % 3]);
    const std::size_t chosen = pick_representative(candidates, scores);
    EXPECT_EQ(chosen, reference_pick(candidates, scores)) << "table " << code;
    for (const auto &f : monotone) {
      std::vector<double> transformed;
      for (double s : scores) transformed.push_back(f(s));
      EXPECT_EQ(pick_representative(candidates, transformed), chosen) << "table " << code;
    }
    ++tables;
  }
  EXPECT_EQ(tables, 81);
}

TEST(Representative, TieBreaks) {
  const std::vector<Triple> c{T("germans", "are", "very punctual"),
                              T("germans", "are", "punctual"),
                              T("germans", "are", "exact")};
  EXPECT_EQ(pick_representative(c, std::vector<double>{0.9, 0.9, 0.1}), 1u);  // fewer tokens
  EXPECT_EQ(pick_representative(c, std::vector<double>{0.5, 0.5, 0.5}), 2u);  // lexicographic
  EXPECT_EQ(pick_representative(c, std::vector<double>{0.95, 0.9, 0.9}), 0u);  // score first
  EXPECT_THROW(pick_representative({}, {}), ClusterUnrepresentable);
  EXPECT_THROW(pick_representative(c, std::vector<double>{0.5}), DataError);
}

TEST(Representative, SelectUsesAcceptabilityOfConcatenation) {
  auto stub = std::make_shared<StubBackend>();
  ScorerGateway gateway(stub);
  const std::vector<Triple> c{T("germans", "are", "punctual"), T("germans", "love", "beer"),
                              T("germans", "drink", "beer daily")};
  const Triple chosen = select_representative(c, gateway);
  ASSERT_TRUE(chosen.score);
  for (const auto &t : c) EXPECT_GE(*chosen.score, stub->acceptability(t.concatenated()));
  EXPECT_EQ(*chosen.score, stub->acceptability(chosen.concatenated()));
}

TEST(Representative, PipelineCountsUnrepresentableClusters) {
  const PipelineConfig config = default_config();
  std::vector<MinedAssertion> mined(3);
  mined[0].entity_id = "german";
  mined[0].statement_text = "germans are punctual";
  mined[1].entity_id = "german";
  mined[1].statement_text = "germans are so punctual";
  mined[2].entity_id = "german";
  mined[2].statement_text = "germans don't smile";
  std::vector<SentenceCluster> clusters(2);
  clusters[0] = {0, "german", 0, {0, 1}};
  clusters[1] = {1, "german", 2, {2}};
  ExtractionReport report;
  const auto reps = extract_representatives(mined, clusters, config,
                                            ScorerGateway(std::make_shared<StubBackend>()),
                                            nullptr, &report);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0].member_count, 2);
  EXPECT_EQ(key(reps[0].triple), "germans|are|punctual");
  EXPECT_EQ(report.unrepresentable, 1u);
  EXPECT_EQ(report.statements_without_triple, 1u);
  EXPECT_EQ(parse_representatives(format_representatives(reps)), reps);
}

}  // namespace
}  // namespace stereokg
