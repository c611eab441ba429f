#include <gtest/gtest.h>

#include <algorithm>
#include <memory>
#include <set>

#include "oracles.h"
#include "stereokg/clustering.h"
#include "stereokg/hashing.h"
#include "stereokg/io.h"
#include "test_support.h"

namespace stereokg {
namespace {

ScorerGateway stub_gateway(std::uint64_t seed = 13) {
  StubOptions o;
  o.seed = seed;
  return ScorerGateway(std::make_shared<StubBackend>(o));
}

std::vector<std::vector<std::size_t>> members_of(const std::vector<SentenceCluster> &cs) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto &c : cs) out.push_back(c.members);
  return out;
}

void expect_invariants(const std::vector<SentenceCluster> &cs,
                       const std::vector<EmbeddingVector> &emb, double threshold,
                       int min_size) {
  std::vector<int> seen(emb.size(), 0);
  bool singletons_started = false;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const auto &c = cs[k];
    EXPECT_EQ(c.cluster_id, static_cast<int>(k));
    EXPECT_TRUE(std::is_sorted(c.members.begin(), c.members.end()));
    EXPECT_TRUE(std::binary_search(c.members.begin(), c.members.end(), c.seed));
    for (std::size_t m : c.members) {
      ++seen[m];
      if (m != c.seed) {
        EXPECT_GE(cosine(emb[c.seed], emb[m]), threshold);
      }
    }
    if (c.is_singleton()) {
      singletons_started = true;
    } else {
      EXPECT_FALSE(singletons_started) << "community after a singleton";
      EXPECT_GE(static_cast<int>(c.members.size()), min_size);
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) EXPECT_EQ(seen[i], 1) << "index " << i;
}

TEST(Clustering, FiveSentenceFixture) {
  const std::vector<std::string> sentences{
      "germans are punctual", "germans love beer", "germans are punctual",
      "germans love beer", "germans are punctual"};
  const auto emb = embed(stub_gateway(), sentences);
  for (double t = 0.5; t <= 0.951; t += 0.05) {
    const auto cs = cluster(emb, t, 2);
    EXPECT_EQ(members_of(cs), testing::oracle_communities(emb, t, 2));
    EXPECT_EQ(members_of(cs),
              (std::vector<std::vector<std::size_t>>{{0, 2, 4}, {1, 3}}));
    expect_invariants(cs, emb, t, 2);
  }
}

TEST(Clustering, TwoHundredSentenceFixtureMatchesOracleAcrossThresholds) {
  const auto sentences = io::read_lines(testing::fixture_path("sentences_200.txt"));
  ASSERT_EQ(sentences.size(), 200u);
  const auto emb = embed(stub_gateway(), sentences);
  std::size_t prev_largest = emb.size() + 1;
  std::size_t prev_candidates = emb.size() + 1;
  for (int step = 0; step < 10; ++step) {
    const double t = 0.50 + 0.05 * step;
    const auto cs = cluster(emb, t, 2);
    EXPECT_EQ(members_of(cs), testing::oracle_communities(emb, t, 2)) << "t=" << t;
    expect_invariants(cs, emb, t, 2);
    // Threshold monotonicity: neighbourhoods only shrink as t grows, so the
    // largest community and the number of eligible seeds never increase.
    std::size_t largest = 0;
    for (const auto &c : cs) largest = std::max(largest, c.members.size());
    std::size_t candidates = 0;
    for (std::size_t i = 0; i < emb.size(); ++i) {
      std::size_t size = 0;
      for (std::size_t j = 0; j < emb.size(); ++j) size += j == i || cosine(emb[i], emb[j]) >= t;
      candidates += size >= 2;
    }
    EXPECT_LE(largest, prev_largest);
    EXPECT_LE(candidates, prev_candidates);
    prev_largest = largest;
    prev_candidates = candidates;
  }
}

TEST(Clustering, RandomPlantedEmbeddingsMatchOracle) {
  testing::Gen gen(2024);
  for (int round = 0; round < 150; ++round) {
    const auto emb = testing::planted_embeddings(gen, static_cast<std::size_t>(gen.integer(0, 60)),
                                                 static_cast<std::size_t>(gen.integer(2, 8)));
    const double t = gen.real(0.3, 0.99);
    const int min_size = gen.integer(2, 5);
    const auto cs = cluster(emb, t, min_size);
    EXPECT_EQ(members_of(cs), testing::oracle_communities(emb, t, min_size));
    expect_invariants(cs, emb, t, min_size);
  }
}

TEST(Clustering, ThresholdOneKeepsOnlyExactDuplicates) {
  const auto emb = embed(stub_gateway(), {"a b", "c d", "a b"});
  const auto cs = cluster(emb, 1.0, 2);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].members, (std::vector<std::size_t>{0, 2}));
}

TEST(Clustering, AssertionsClusterPerEntity) {
  std::vector<MinedAssertion> mined;
  auto add = [&](std::string entity, std::string statement) {
    MinedAssertion a;
    a.entity_id = std::move(entity);
    a.statement_text = std::move(statement);
    mined.push_back(a);
  };
  add("german", "germans are punctual");
  add("french", "germans are punctual");
  add("german", "germans are punctual");
  add("german", "germans love beer");
  ClusteringReport report;
  const auto cs = cluster_assertions(mined, stub_gateway(), {0.75, 2}, &report);
  ASSERT_EQ(cs.size(), 3u);
  EXPECT_EQ(cs[0].entity_id, "french");
  EXPECT_EQ(cs[1].entity_id, "german");
  EXPECT_EQ(cs[1].members, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(cs[2].members, (std::vector<std::size_t>{3}));
  EXPECT_EQ(report.clusters, 1u);
  EXPECT_EQ(report.singletons, 2u);
  for (std::size_t k = 0; k < cs.size(); ++k) EXPECT_EQ(cs[k].cluster_id, static_cast<int>(k));
}

TEST(Clustering, FormatParseRoundTrip) {
  const auto sentences = io::read_lines(testing::fixture_path("sentences_200.txt"));
  auto cs = cluster(embed(stub_gateway(), sentences), 0.75, 2);
  for (auto &c : cs) c.entity_id = "german";
  EXPECT_EQ(parse_clusters(format_clusters(cs)), cs);
}

TEST(Clustering, EmbeddingCacheRoundTripIsBitExact) {
  const std::vector<std::string> texts{"one", "two", "three"};
  const auto emb = embed(stub_gateway(), texts);
  const auto parsed = parse_embedding_cache(format_embedding_cache(texts, emb));
  ASSERT_EQ(parsed.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(parsed[i].first, hex64(fnv1a64(texts[i])));
    EXPECT_EQ(parsed[i].second, emb[i]);
  }
}

TEST(Clustering, MixedDimensionsAreDataError) {
  class Ragged : public ScorerBackend {
   public:
    ScorerResult call(const ScorerRequest &r) override {
      ScorerResult out;
      out.capability = r.capability;
      for (std::size_t i = 0; i < r.size(); ++i) out.vectors.push_back(std::vector<double>(i + 1, 1.0));
      return out;
    }
    std::string name() const override { return "ragged"; }
  };
  ScorerGateway g(std::make_shared<Ragged>());
  EXPECT_THROW(embed(g, {"a", "b"}), Error);
}

}  // namespace
}  // namespace stereokg
