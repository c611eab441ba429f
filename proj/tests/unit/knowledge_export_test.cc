#include <gtest/gtest.h>

#include <memory>
#include <set>

#include "stereokg/io.h"
#include "stereokg/knowledge_export.h"
#include "test_support.h"

namespace stereokg {
namespace {

using testing::make_entry;

TEST(UkExport, MemberSentencesWithOptionalDedup) {
  std::vector<KgEntry> kg{make_entry(0, "german", "germans", "are", "punctual", 2),
                          make_entry(1, "german", "germans", "love", "beer")};
  kg[0].member_sentences = {"Why are Germans  punctual?", "germans are\npunctual"};
  kg[1].member_sentences = {"Why are Germans punctual?"};
  const auto dedup = export_uk(kg, true);
  EXPECT_EQ(dedup.sentences,
            (std::vector<std::string>{"Why are Germans punctual?", "germans are punctual"}));
  EXPECT_EQ(dedup.source_entry_ids, (std::vector<int>{0, 0}));
  const auto all = export_uk(kg, false);
  EXPECT_EQ(all.sentences.size(), 3u);
  EXPECT_EQ(format_corpus(dedup), "Why are Germans punctual?\ngermans are punctual\n");
  EXPECT_EQ(format_corpus_sidecar(dedup),
            "{\"line\":1,\"entry_id\":0}\n{\"line\":2,\"entry_id\":0}\n");
}

class FailingVerbalizer : public ScorerBackend {
 public:
  explicit FailingVerbalizer(std::string bad) : bad_(std::move(bad)) {}
  ScorerResult call(const ScorerRequest &r) override {
    ScorerResult out;
    out.capability = r.capability;
    for (const auto &t : r.triples) {
      if (t.o == bad_) throw ScorerError("cannot verbalize");
      out.sentences.push_back("they say " + t.s + " " + t.p + " " + t.o);
    }
    return out;
  }
  std::string name() const override { return "failing"; }

 private:
  std::string bad_;
};

TEST(SkExport, StubVerbalizerMatchesFallback) {
  const std::vector<KgEntry> kg{make_entry(0, "jewish", "jewish men", "get", "circumcisions")};
  ScorerGateway g(std::make_shared<StubBackend>());
  const auto sk = export_sk(kg, &g);
  EXPECT_EQ(sk.corpus.sentences, (std::vector<std::string>{"Jewish men get circumcisions."}));
  EXPECT_EQ(sk.verbalized, 1);
  EXPECT_THROW(export_sk({}, &g), EmptyCorpus);
}

TEST(SkExport, FailuresFallBackOrSkip) {
  const std::vector<KgEntry> kg{make_entry(0, "german", "germans", "love", "beer"),
                                make_entry(1, "german", "germans", "hate", "bad"),
                                make_entry(2, "german", "germans", "are", "tall")};
  ScorerGateway g(std::make_shared<FailingVerbalizer>("bad"));
  const auto with = export_sk(kg, &g, true);
  EXPECT_EQ(with.corpus.sentences,
            (std::vector<std::string>{"They say germans love beer.", "Germans hate bad.",
                                      "They say germans are tall."}));
  EXPECT_EQ(with.verbalized, 2);
  EXPECT_EQ(with.fallback, 1);
  const auto without = export_sk(kg, &g, false);
  EXPECT_EQ(without.corpus.sentences.size(), 2u);
  EXPECT_EQ(without.corpus.source_entry_ids, (std::vector<int>{0, 2}));
  EXPECT_EQ(without.skipped, 1);
  EXPECT_EQ(export_sk(kg, nullptr, true).fallback, 3);
  EXPECT_THROW(export_sk(kg, nullptr, false), ConfigError);
}

std::vector<LabeledSample> samples(int n, bool fixed) {
  std::vector<LabeledSample> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({"s" + std::to_string(1000 + i), i % 2 ? "hate" : "none",
                   fixed ? (i % 5 == 0 ? "test" : "train") : ""});
  }
  return out;
}

TEST(Splits, RatioModeSizesAndPartition) {
  const auto s = samples(200, false);
  std::vector<std::string> stereo;
  for (int i = 0; i < 200; i += 7) stereo.push_back("s" + std::to_string(1000 + i));
  const auto m = build_split_manifest("olid", s, stereo, 13);
  EXPECT_EQ(m.mode, "ratio");
  EXPECT_EQ(m.train.size(), 140u);
  EXPECT_EQ(m.test.size(), 40u);
  EXPECT_EQ(m.dev.size() + m.dev_exclusions.size(), 20u);
  std::set<std::string> ids;
  for (const auto *part : {&m.train, &m.dev, &m.test}) {
    for (const auto &x : *part) EXPECT_TRUE(ids.insert(x.id).second);
  }
  for (const auto &x : m.dev_exclusions) EXPECT_TRUE(ids.insert(x).second);
  EXPECT_EQ(ids.size(), 200u);
  const std::set<std::string> stereo_set(stereo.begin(), stereo.end());
  for (const auto &x : m.dev) EXPECT_FALSE(stereo_set.count(x.id));
  for (const auto &id : m.stereotype_test) EXPECT_TRUE(stereo_set.count(id));
  EXPECT_EQ(m.stereotype_test.size() + m.stereotype_in_train.size(), stereo.size());
  EXPECT_EQ(format_split_manifest(build_split_manifest("olid", s, stereo, 13)),
            format_split_manifest(m));
}

TEST(Splits, FixedSplitKeepsTestAndCarvesDev) {
  const auto s = samples(100, true);
  const auto m = build_split_manifest("wsf", s, {}, 1);
  EXPECT_EQ(m.mode, "holdout_dev");
  EXPECT_EQ(m.test.size(), 20u);
  EXPECT_EQ(m.dev.size(), 16u);
  EXPECT_EQ(m.train.size(), 64u);
  for (const auto &x : m.test) EXPECT_EQ(x.split, "test");
}

TEST(Splits, UnknownStereotypeIdsAreListed) {
  try {
    build_split_manifest("olid", samples(10, false), {"nope", "s1000", "gone"}, 1);
    FAIL();
  } catch (const DataError &e) {
    EXPECT_NE(std::string(e.what()).find("nope, gone"), std::string::npos) << e.what();
  }
}

TEST(Splits, LabelParsing) {
  const auto s = parse_labels("id,label,split\na,hate,train\nb,none,test\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].split, "test");
  EXPECT_THROW(parse_labels("id,label\na,x\na,y\n"), DataError);
  EXPECT_THROW(parse_labels("x,y\n"), DataError);
  EXPECT_THROW(parse_labels("id,label,split\na,x,dev\n"), DataError);
}

}  // namespace
}  // namespace stereokg
