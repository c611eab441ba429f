#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "oracles.h"
#include "stereokg/eval.h"
#include "stereokg/io.h"
#include "stereokg/verbalize.h"
#include "test_support.h"

namespace stereokg {
namespace {

using testing::make_entry;

std::vector<KgEntry> strata_kg(int n_sd, int n_cd) {
  std::vector<KgEntry> kg;
  for (int i = 0; i < n_sd; ++i) kg.push_back(make_entry(i, "german", "germans", "like", "x" + std::to_string(i)));
  for (int i = 0; i < n_cd; ++i) {
    kg.push_back(make_entry(n_sd + i, "french", "french people", "like", "y" + std::to_string(i), 2 + i % 3));
  }
  return kg;
}

AnnotationItem item(int id, Derivation d, std::optional<int> dup = std::nullopt) {
  AnnotationItem it;
  it.item_id = id;
  it.entry_id = dup ? *dup : id;
  it.derivation = d;
  it.duplicate_of = dup;
  return it;
}

AnnotationRecord rec(std::string a, int item, int coh, int com, int dom, int cr1 = 0,
                     int cr2 = 0) {
  return {std::move(a), item, coh, com, dom, cr1, cr2};
}

TEST(Sampling, FiftyFiftyTenGivesOneHundredTenItems) {
  const auto kg = strata_kg(80, 70);
  const auto items = sample_eval_set(kg, 50, 10, 13);
  ASSERT_EQ(items.size(), 110u);
  int sd = 0, cd = 0, dups = 0;
  std::set<int> originals;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto &it = items[i];
    EXPECT_EQ(it.item_id, static_cast<int>(i + 1));
    EXPECT_EQ(it.derivation, kg[it.entry_id].derivation);
    EXPECT_EQ(it.shown_text, verbalize_fallback(kg[it.entry_id].triple.subject,
                                                kg[it.entry_id].triple.predicate,
                                                kg[it.entry_id].triple.object));
    if (it.duplicate_of) {
      ++dups;
      const auto &orig = items[*it.duplicate_of - 1];
      EXPECT_LT(orig.item_id, it.item_id);
      EXPECT_EQ(orig.entry_id, it.entry_id);
      EXPECT_FALSE(orig.duplicate_of);
    } else {
      EXPECT_TRUE(originals.insert(it.entry_id).second);
      (it.derivation == Derivation::kClusterDerived ? cd : sd)++;
    }
  }
  EXPECT_EQ(sd, 50);
  EXPECT_EQ(cd, 50);
  EXPECT_EQ(dups, 10);
  EXPECT_EQ(sample_eval_set(kg, 50, 10, 13), items);
  EXPECT_NE(sample_eval_set(kg, 50, 10, 14), items);
}

TEST(Sampling, SmallStratumIsNamed) {
  try {
    sample_eval_set(strata_kg(80, 3), 50, 10, 1);
    FAIL();
  } catch (const DataError &e) {
    EXPECT_NE(std::string(e.what()).find("cluster_derived"), std::string::npos);
  }
}

TEST(Suc, StrictInequalityBoundary) {
  const std::vector<AnnotationItem> items{item(1, Derivation::kClusterDerived)};
  // Means (2, 2, 1.0): DOM is not strictly above 1.
  const auto r = success_rate(items, {rec("a", 1, 2, 2, 1), rec("b", 1, 2, 2, 1)});
  EXPECT_EQ(r.successes_all, 0);
  EXPECT_DOUBLE_EQ(r.suc_all, 0.0);
  // Means (2, 2, 1.5) succeed.
  EXPECT_DOUBLE_EQ(success_rate(items, {rec("a", 1, 2, 2, 1), rec("b", 1, 2, 2, 2)}).suc_cd,
                   100.0);
}

TEST(Suc, StrataDuplicatesAndMajorityVote) {
  const std::vector<AnnotationItem> items{item(1, Derivation::kClusterDerived),
                                          item(2, Derivation::kSingletonDerived),
                                          item(3, Derivation::kClusterDerived, 1)};
  const std::vector<AnnotationRecord> records{
      rec("a", 1, 2, 2, 2), rec("b", 1, 2, 2, 2), rec("c", 1, 0, 0, 0),
      rec("a", 2, 2, 2, 2), rec("b", 2, 1, 2, 2), rec("c", 2, 2, 1, 2),
      rec("a", 3, 0, 0, 0)};
  const auto mean = success_rate(items, records, SucAggregation::kMean);
  EXPECT_EQ(mean.items_all, 2);
  EXPECT_EQ(mean.successes_cd, 1);  // (4/3, 4/3, 4/3)
  EXPECT_EQ(mean.successes_sd, 1);  // (5/3, 5/3, 2)
  const auto vote = success_rate(items, records, SucAggregation::kMajorityVote);
  EXPECT_EQ(vote.successes_cd, 1);
  EXPECT_EQ(vote.successes_sd, 1);
  EXPECT_THROW(success_rate(items, {rec("a", 1, 2, 2, 2)}), DataError);
  EXPECT_THROW(success_rate(items, {rec("a", 1, 2, 2, 2), rec("a", 1, 2, 2, 2),
                                    rec("a", 2, 2, 2, 2)}),
               DataError);
  EXPECT_THROW(validate_record(rec("a", 1, 3, 0, 0)), DataError);
  EXPECT_THROW(validate_record(rec("a", 1, 0, 0, 0, 0, 5)), DataError);
}

TEST(Agreement, MatchesPairwiseOracleOnThreeAnnotators) {
  testing::Gen gen(8);
  for (int round = 0; round < 200; ++round) {
    std::vector<AnnotationRecord> records;
    const int n_items = gen.integer(1, 12);
    for (const char *a : {"a1", "a2", "a3"}) {
      for (int i = 1; i <= n_items; ++i) {
        if (gen.coin(0.2)) continue;
        records.push_back(rec(a, i, gen.integer(0, 2), gen.integer(0, 2), gen.integer(0, 2),
                              gen.integer(0, 1), gen.integer(0, 4)));
      }
    }
    for (Metric m : kAllMetrics) {
      bool any_shared = false;
      try {
        const double got = observed_agreement(records, m);
        any_shared = true;
        EXPECT_EQ(got, testing::oracle_observed_agreement(records, m));
      } catch (const DataError &) {
        EXPECT_FALSE(any_shared);
      }
    }
  }
}

TEST(Agreement, HandExample) {
  const std::vector<AnnotationRecord> r{rec("a", 1, 2, 0, 0), rec("b", 1, 2, 0, 0),
                                        rec("c", 1, 1, 0, 0), rec("a", 2, 0, 0, 0),
                                        rec("b", 2, 1, 0, 0)};
  // pairs: (a,b) 1/2, (a,c) 0/1, (b,c) 0/1 -> mean 1/6
  EXPECT_DOUBLE_EQ(observed_agreement(r, Metric::kCoh), (0.5 + 0.0 + 0.0) / 3);
  EXPECT_THROW(observed_agreement({rec("a", 1, 0, 0, 0)}, Metric::kCoh), DataError);
}

TEST(IntraConsistency, FractionsOfMatchingMetrics) {
  const std::vector<AnnotationItem> items{
      item(1, Derivation::kClusterDerived), item(2, Derivation::kSingletonDerived),
      item(3, Derivation::kClusterDerived, 1), item(4, Derivation::kSingletonDerived, 2)};
  const std::vector<AnnotationRecord> records{
      // a: one pair with 4 of 5 metrics equal.
      rec("a", 1, 2, 2, 2, 1, 4), rec("a", 3, 2, 2, 2, 1, 3),
      // b: pairs with 5/5 and 4/5 equal.
      rec("b", 1, 1, 1, 1, 0, 0), rec("b", 3, 1, 1, 1, 0, 0),
      rec("b", 2, 0, 1, 2, 1, 2), rec("b", 4, 0, 1, 2, 0, 2)};
  const auto c = intra_consistency(records, items);
  EXPECT_DOUBLE_EQ(c.at("a"), 0.8);
  EXPECT_DOUBLE_EQ(c.at("b"), 0.9);
  EXPECT_THROW(intra_consistency(records, {items[0], items[1]}), DataError);
}

class AccAtFive : public ::testing::Test {
 protected:
  std::vector<MaskedProbe> probes_ = parse_probes(testing::read_fixture("probes_100.jsonl"));
  std::map<int, std::vector<std::string>> base_ =
      parse_predictions(testing::read_fixture("predictions_base.jsonl"));
  std::map<int, std::vector<std::string>> uk_ =
      parse_predictions(testing::read_fixture("predictions_base_uk.jsonl"));
};

TEST_F(AccAtFive, BaseRowArithmetic) {
  ASSERT_EQ(probes_.size(), 100u);
  const AccResult r = acc_at_k(probes_, base_, 5);
  EXPECT_EQ(r.hits, 37);
  EXPECT_EQ(r.probes, 100);
  EXPECT_DOUBLE_EQ(r.accuracy, 37.0);
  EXPECT_DOUBLE_EQ(acc_at_k(probes_, uk_, 5).accuracy, 48.0);
}

TEST_F(AccAtFive, HealthcareAndScienceExamples) {
  auto single = [&](int id, const std::map<int, std::vector<std::string>> &preds) {
    return acc_at_k({probes_[static_cast<std::size_t>(id - 1)]}, {{id, preds.at(id)}}, 5).hits;
  };
  ASSERT_EQ(probes_[0].gold, "science");
  ASSERT_EQ(probes_[1].gold, "healthcare");
  EXPECT_EQ(single(1, base_), 0);  // too, now, again
  EXPECT_EQ(single(2, base_), 0);
  EXPECT_EQ(single(2, uk_), 1);    // healthcare, lunch, tuition
  EXPECT_EQ(single(1, uk_), 0);
}

TEST(Acc, CaseFoldingAndShortLists) {
  const std::vector<MaskedProbe> p{{1, "Americans vote for <mask>.", "Trump", "american"}};
  EXPECT_EQ(acc_at_k(p, {{1, {"TRUMP"}}}, 5).hits, 1);
  EXPECT_EQ(acc_at_k(p, {{1, {"a", "b", "trump"}}}, 2).hits, 0);
  EXPECT_THROW(acc_at_k(p, {{1, {}}}, 5), DataError);
  EXPECT_THROW(acc_at_k(p, {}, 5), DataError);
  EXPECT_THROW(validate_probe({2, "no mask here", "x", "german"}), DataError);
  EXPECT_THROW(validate_probe({3, "<mask> and <mask>", "x", "german"}), DataError);
}

TEST(EvalIo, SheetResponsesProbesRoundTrip) {
  const auto kg = strata_kg(20, 20);
  const auto items = sample_eval_set(kg, 5, 3, 4);
  EXPECT_EQ(parse_sheet(format_sheet(items), &kg), items);
  const std::vector<AnnotationRecord> records{rec("a", 1, 2, 1, 0, 1, 4),
                                              rec("b,c", 2, 0, 0, 0, 0, 0)};
  EXPECT_EQ(parse_responses(format_responses(records)), records);
  EXPECT_THROW(parse_responses("annotator_id,item_id\n"), DataError);
  const std::vector<MaskedProbe> probes{{1, "Germans love <mask>.", "beer", "german"}};
  EXPECT_EQ(parse_probes(format_probes(probes)), probes);
  const std::map<int, std::vector<std::string>> preds{{1, {"beer", "it"}}};
  EXPECT_EQ(parse_predictions(format_predictions(preds)), preds);
}

TEST(EvalIo, InteractiveAnnotationReasksOnBadInput) {
  const auto kg = strata_kg(2, 2);
  const std::vector<AnnotationItem> items = sample_eval_set(kg, 1, 0, 1);
  std::istringstream in("2\n9\n1\n0\n1\n4\nx\n0\n0\n0\n0\n0\n");
  std::ostringstream out;
  const auto records = annotate(items, "ann", in, out);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0], rec("ann", 1, 2, 1, 0, 1, 4));
  EXPECT_EQ(records[1], rec("ann", 2, 0, 0, 0, 0, 0));
  std::istringstream short_in("1\n");
  EXPECT_THROW(annotate(items, "ann", short_in, out), DataError);
}

}  // namespace
}  // namespace stereokg
