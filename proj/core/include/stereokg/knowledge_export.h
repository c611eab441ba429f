#ifndef STEREOKG_KNOWLEDGE_EXPORT_H_
#define STEREOKG_KNOWLEDGE_EXPORT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stereokg/kg.h"
#include "stereokg/scorer.h"

namespace stereokg {

enum class CorpusKind { kUnstructured, kStructured };

struct KnowledgeCorpus {
  CorpusKind kind = CorpusKind::kUnstructured;
  std::vector<std::string> sentences;
  std::vector<int> source_entry_ids;  // parallel to sentences
};

// Member sentences of every entry, in KG order. With dedup, a sentence seen
// earlier (exact match after trimming) is dropped.
KnowledgeCorpus export_uk(const std::vector<KgEntry> &kg, bool dedup = true);

struct SkExport {
  KnowledgeCorpus corpus;
  int verbalized = 0;  // sentences produced by the scorer
  int fallback = 0;    // sentences produced by the concatenation verbalizer
  int skipped = 0;     // entries lost to scorer failures with fallback off
};

// One sentence per entry through the verbalize capability. With fallback on,
// scorer failures (or a null gateway) use the concatenation verbalizer;
// otherwise the entry is skipped and counted. Output sentences start
// uppercase and end in terminal punctuation. Throws EmptyCorpus on an empty
// KG.
SkExport export_sk(const std::vector<KgEntry> &kg, const ScorerGateway *gateway,
                   bool fallback = true);

// One sentence per line.
std::string format_corpus(const KnowledgeCorpus &corpus);
// {"line": 1-based line, "entry_id": id} per sentence.
std::string format_corpus_sidecar(const KnowledgeCorpus &corpus);

struct LabeledSample {
  std::string id;
  std::string label;
  std::string split;  // "train" / "test" for datasets with a fixed split, else ""
};

// CSV with header id,label[,split].
std::vector<LabeledSample> parse_labels(std::string_view content);

struct SplitManifest {
  std::string dataset;
  std::uint64_t seed = 0;
  std::string mode;  // "ratio" or "holdout_dev"
  std::vector<LabeledSample> train;
  std::vector<LabeledSample> dev;
  std::vector<LabeledSample> test;
  std::vector<std::string> stereotype_test;
  std::vector<std::string> dev_exclusions;
  std::vector<std::string> stereotype_in_train;
};

// Samples without a split column: shuffled 70/10/20 (train and dev sizes
// rounded, test takes the rest). Samples with train/test splits: test kept,
// 20% of train split off as dev. Stereotype samples drawn into dev leave dev
// and are recorded as dev_exclusions; the stereotype test set is the
// stereotype samples in test plus those exclusions. Unknown stereotype ids
// raise a DataError listing them.
SplitManifest build_split_manifest(std::string_view dataset,
                                   const std::vector<LabeledSample> &samples,
                                   const std::vector<std::string> &stereotype_ids,
                                   std::uint64_t seed);

std::string format_split_manifest(const SplitManifest &manifest);

}  // namespace stereokg

#endif  // STEREOKG_KNOWLEDGE_EXPORT_H_
