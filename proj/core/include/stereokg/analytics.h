#ifndef STEREOKG_ANALYTICS_H_
#define STEREOKG_ANALYTICS_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stereokg/config.h"
#include "stereokg/kg.h"
#include "stereokg/scorer.h"

namespace stereokg {

struct MaskResult {
  std::string text;
  std::size_t replacements = 0;
};

// Replaces every surface form of the entity (longest first, case-insensitive,
// word-bounded) with the entity's mask term.
MaskResult mask_entity(std::string_view sentence, const EntitySpec &entity);

struct SentimentSummary {
  std::string entity_id;
  double pos_pct = 0.0;
  double neu_pct = 0.0;
  double neg_pct = 0.0;
  int n = 0;         // classified entries
  int excluded = 0;  // entries the scorer failed on
  int unmasked = 0;  // entries with no entity mention to mask
};

SentimentSummary summarize_labels(std::string_view entity_id,
                                  const std::vector<SentimentLabel> &labels);

// Verbalize (concatenation), mask, classify; one summary per entity that
// has at least one classified entry, in entity-id order.
std::vector<SentimentSummary> sentiment_distribution(
    const std::vector<KgEntry> &entries, const PipelineConfig &config,
    const ScorerGateway &gateway);

// entity, n, pos_pct, neu_pct, neg_pct
std::string format_sentiment_tsv(const std::vector<SentimentSummary> &rows);

// Predicate and object tokens: lowercase, punctuation stripped, stopwords
// removed. Entity surface forms are kept.
std::vector<std::string> tokenize_po(const Triple &triple,
                                     const std::set<std::string> &stopwords);

// (entity, token) -> co-occurrence count.
using CountTable = std::map<std::pair<std::string, std::string>, long long>;

CountTable count_tokens(const std::vector<KgEntry> &entries,
                        const std::set<std::string> &stopwords);

struct AssociationCell {
  long long count = 0;
  double pmi = 0.0;         // log p(e,w) / (p(e) p(w))
  double pmi_others = 0.0;  // sum of pmi(e', w) over other entities e'
  double rel_freq = 0.0;    // count(e,w) / sum_w' count(e,w')
  double alpha = 0.0;       // (pmi - pmi_others) * rel_freq
};

struct AssociationTable {
  // entity -> token -> cell; only pairs with a positive count are stored.
  std::map<std::string, std::map<std::string, AssociationCell>> cells;

  const AssociationCell *find(std::string_view entity, std::string_view token) const;
  std::vector<std::string> entities() const;
};

// Natural log. A pair that never co-occurs contributes pmi 0 to the other
// entities' pmi_others. Throws EmptyCorpus on an empty table.
AssociationTable association_from_counts(const CountTable &counts);
AssociationTable association(const std::vector<KgEntry> &entries,
                             const std::set<std::string> &stopwords);

struct RankedToken {
  std::string token;
  AssociationCell cell;
  int rank = 0;  // 1-based
};

// alpha descending, then count descending, then token ascending.
// Throws DataError for an unknown entity.
std::vector<RankedToken> top_tokens(const AssociationTable &table,
                                    std::string_view entity, std::size_t k);

// entity, token, count, pi, pi_bar, f, alpha, rank (all tokens, ranked).
std::string format_association_tsv(const AssociationTable &table);

// Per entity: display name, KG count, top-k tokens.
std::string format_summary(const AssociationTable &table, const KgStats &kg_stats,
                           const PipelineConfig &config, std::size_t k);

}  // namespace stereokg

#endif  // STEREOKG_ANALYTICS_H_
