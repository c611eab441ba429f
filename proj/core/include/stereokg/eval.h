#ifndef STEREOKG_EVAL_H_
#define STEREOKG_EVAL_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stereokg/config.h"
#include "stereokg/kg.h"

namespace stereokg {

struct AnnotationItem {
  int item_id = 0;  // 1-based position in the sheet
  int entry_id = 0;
  std::string shown_text;
  Derivation derivation = Derivation::kSingletonDerived;
  std::optional<int> duplicate_of;  // earlier item_id showing the same entry

  bool operator==(const AnnotationItem &) const = default;
};

struct AnnotationRecord {
  std::string annotator_id;
  int item_id = 0;
  int coh = 0;  // 0..2
  int com = 0;  // 0..2
  int dom = 0;  // 0..2
  int cr1 = 0;  // 0..1
  int cr2 = 0;  // 0..4

  bool operator==(const AnnotationRecord &) const = default;
};

enum class Metric { kCoh, kCom, kDom, kCr1, kCr2 };

inline constexpr Metric kAllMetrics[] = {Metric::kCoh, Metric::kCom, Metric::kDom,
                                         Metric::kCr1, Metric::kCr2};

std::string_view metric_name(Metric metric);
Metric parse_metric(std::string_view name);
int metric_value(const AnnotationRecord &record, Metric metric);
int metric_max(Metric metric);

// Throws DataError when a value is out of range.
void validate_record(const AnnotationRecord &record);

// n_per_stratum entries from each of the singleton- and cluster-derived
// strata, plus n_duplicates re-shown items, shuffled by seed. Shown text is
// the concatenation verbalization of the triple.
std::vector<AnnotationItem> sample_eval_set(const std::vector<KgEntry> &kg,
                                            int n_per_stratum, int n_duplicates,
                                            std::uint64_t seed);

struct SucResult {
  double suc_all = 0.0;
  double suc_sd = 0.0;
  double suc_cd = 0.0;
  int items_all = 0;
  int items_sd = 0;
  int items_cd = 0;
  int successes_all = 0;
  int successes_sd = 0;
  int successes_cd = 0;
};

// Percentages over non-duplicate items. kMean: success iff the mean COH, COM
// and DOM ratings are each strictly above 1. kMajorityVote: success iff for
// each of the three a strict majority of annotators rated above 1.
SucResult success_rate(const std::vector<AnnotationItem> &items,
                       const std::vector<AnnotationRecord> &records,
                       SucAggregation aggregation = SucAggregation::kMean);

// Mean over annotator pairs of the share of co-annotated items with an
// identical value. Pairs without shared items are skipped.
double observed_agreement(const std::vector<AnnotationRecord> &records, Metric metric);

// annotator -> mean over rated duplicate pairs of the fraction of the five
// metrics that match the original.
std::map<std::string, double> intra_consistency(
    const std::vector<AnnotationRecord> &records,
    const std::vector<AnnotationItem> &items);

inline constexpr std::string_view kMaskToken = "<mask>";

struct MaskedProbe {
  int probe_id = 0;
  std::string masked;  // exactly one <mask>
  std::string gold;
  std::string entity_id;

  bool operator==(const MaskedProbe &) const = default;
};

void validate_probe(const MaskedProbe &probe);

struct AccResult {
  int hits = 0;
  int probes = 0;
  double accuracy = 0.0;  // percentage
};

// Hit iff the case-folded gold token is among the first min(k, n)
// predictions. Every probe needs at least one prediction.
AccResult acc_at_k(const std::vector<MaskedProbe> &probes,
                   const std::map<int, std::vector<std::string>> &predictions, int k);

// Sheet CSV: item_id, entry_id, shown_text, duplicate_of. Derivation is not
// stored; parse_sheet resolves it from the KG when one is given.
std::string format_sheet(const std::vector<AnnotationItem> &items);
std::vector<AnnotationItem> parse_sheet(std::string_view content,
                                        const std::vector<KgEntry> *kg = nullptr);

// Responses CSV: annotator_id, item_id, coh, com, dom, cr1, cr2.
std::string format_responses(const std::vector<AnnotationRecord> &records);
std::vector<AnnotationRecord> parse_responses(std::string_view content);

// Probes JSONL: {"id","masked","gold","entity"}.
std::string format_probes(const std::vector<MaskedProbe> &probes);
std::vector<MaskedProbe> parse_probes(std::string_view content);

// Predictions JSONL: {"id","topk"}.
std::string format_predictions(const std::map<int, std::vector<std::string>> &predictions);
std::map<int, std::vector<std::string>> parse_predictions(std::string_view content);

// Terminal annotation: prompts for the five ratings of every item and
// re-asks on invalid input. Throws DataError if input ends early.
std::vector<AnnotationRecord> annotate(const std::vector<AnnotationItem> &items,
                                       std::string_view annotator_id, std::istream &in,
                                       std::ostream &out);

}  // namespace stereokg

#endif  // STEREOKG_EVAL_H_
