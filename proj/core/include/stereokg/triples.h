#ifndef STEREOKG_TRIPLES_H_
#define STEREOKG_TRIPLES_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stereokg/clustering.h"
#include "stereokg/config.h"
#include "stereokg/errors.h"
#include "stereokg/mining.h"
#include "stereokg/scorer.h"

namespace stereokg {

struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;
  std::size_t source_assertion = 0;
  std::optional<double> score;  // acceptability in [0,1] once ranked

  bool operator==(const Triple &) const = default;
  std::size_t token_count() const;
  // Subject, predicate and object joined by single spaces.
  std::string concatenated() const;
};

struct FilterLexicons {
  std::set<std::string> personal_pronouns;
  std::set<std::string> colloquialisms;
  std::set<std::string> modalities;

  static FilterLexicons from_params(const ExtractionParams &params);
};

// Optional second extractor. Its candidates are appended after the
// built-in ones.
class ExternalExtractor {
 public:
  virtual ~ExternalExtractor() = default;
  virtual std::vector<TripleText> extract(std::string_view sentence) = 0;
};

// POST {url}/extract {"sentence": str} -> {"triples": [{"s","p","o"}]}
class HttpExtractor : public ExternalExtractor {
 public:
  explicit HttpExtractor(std::string url, int timeout_ms = 30000);
  std::vector<TripleText> extract(std::string_view sentence) override;

 private:
  std::string url_;
  int timeout_ms_;
};

// Rule-based extraction. Finds verb groups (closed verb lexicon) that occur
// after the first entity surface form; the subject is everything before the
// first group. Each further group yields another candidate whose predicate
// spans from the first group through that group, so one statement can yield
// several triples. Returns nothing when no verb group leaves a non-empty
// object.
std::vector<Triple> extract(std::string_view statement, const EntitySpec &entity,
                            std::size_t source_assertion = 0,
                            ExternalExtractor *external = nullptr);

struct FilterReport {
  std::size_t input = 0;
  std::size_t dropped_pronoun = 0;
  std::size_t dropped_no_entity = 0;
  std::size_t dropped_emptied = 0;
  std::size_t kept = 0;
};

// The three heuristics, in order: drop triples with a personal pronoun in
// any field; drop triples whose subject lacks an entity surface form;
// delete colloquialism and modality tokens from every field, dropping
// triples left with an empty field.
std::optional<Triple> filter_one(const Triple &triple, const EntitySpec &entity,
                                 const FilterLexicons &lexicons,
                                 FilterReport *report = nullptr);
std::vector<Triple> filter(const std::vector<Triple> &triples,
                           const EntitySpec &entity, const FilterLexicons &lexicons,
                           FilterReport *report = nullptr);

class ClusterUnrepresentable : public DataError {
 public:
  explicit ClusterUnrepresentable(const std::string &message)
      : DataError("ClusterUnrepresentable: " + message) {}
};

// Index of the best candidate: highest score, then fewer tokens, then
// lexicographically smallest (subject, predicate, object).
std::size_t pick_representative(std::span<const Triple> candidates,
                                 std::span<const double> scores);

// Scores the concatenated candidates for acceptability and returns the
// winner with its score filled in.
Triple select_representative(const std::vector<Triple> &candidates,
                             const ScorerGateway &gateway);

struct Representative {
  int cluster_id = 0;
  std::string entity_id;
  int member_count = 0;
  Triple triple;
  bool operator==(const Representative &) const = default;
};

struct ExtractionReport {
  std::size_t clusters = 0;
  std::size_t statements = 0;
  std::size_t statements_without_triple = 0;
  std::size_t candidates = 0;
  FilterReport filter;
  std::size_t representatives = 0;
  std::size_t unrepresentable = 0;
};

// extract -> filter -> select for every cluster. Clusters with no
// surviving triple are skipped and counted.
std::vector<Representative> extract_representatives(
    const std::vector<MinedAssertion> &assertions,
    const std::vector<SentenceCluster> &clusters, const PipelineConfig &config,
    const ScorerGateway &gateway, ExternalExtractor *external = nullptr,
    ExtractionReport *report = nullptr);

// Triple dump TSV: entity, subject, predicate, object, cluster_id, member_count.
std::string format_triples_tsv(const std::vector<Representative> &reps);
// Full-fidelity handoff (includes score and source assertion).
std::string format_representatives(const std::vector<Representative> &reps);
std::vector<Representative> parse_representatives(std::string_view content);
std::vector<Representative> load_representatives(const std::filesystem::path &path);

}  // namespace stereokg

#endif  // STEREOKG_TRIPLES_H_
