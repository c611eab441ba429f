#ifndef STEREOKG_CONFIG_H_
#define STEREOKG_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace stereokg {

enum class EntityKind { kReligion, kNationality };

std::string_view entity_kind_name(EntityKind kind);
// Type word substituted for entity mentions during sentiment masking.
std::string_view mask_term_for(EntityKind kind);

// One target social group.
struct EntitySpec {
  std::string id;            // short lowercase key, e.g. "muslim"
  std::string display_name;  // e.g. "Muslim"
  EntityKind kind = EntityKind::kReligion;
  std::vector<std::string> surface_forms;  // lowercase, matched in text
  std::string mask_term;                   // "religion" or "nation"

  bool operator==(const EntitySpec &) const = default;
};

enum class TemplateForm { kQuestion, kStatement };

inline constexpr std::string_view kSubjectPlaceholder = "<SUB>";

struct QueryTemplate {
  std::string pattern;  // exactly one <SUB>
  TemplateForm form = TemplateForm::kQuestion;

  bool operator==(const QueryTemplate &) const = default;
};

struct ClusteringParams {
  double threshold = 0.75;
  int min_size = 2;
  bool operator==(const ClusteringParams &) const = default;
};

struct ExtractionParams {
  std::vector<std::string> personal_pronouns;
  std::vector<std::string> colloquialisms;
  std::vector<std::string> modalities;
  std::string external_extractor_url;  // empty: built-in extractor only
  bool operator==(const ExtractionParams &) const = default;
};

struct AnalyticsParams {
  std::vector<std::string> stopwords;
  int top_k = 12;
  bool operator==(const AnalyticsParams &) const = default;
};

enum class SucAggregation { kMean, kMajorityVote };

struct EvalParams {
  int n_per_stratum = 50;
  int n_duplicates = 10;
  SucAggregation aggregation = SucAggregation::kMean;
  bool operator==(const EvalParams &) const = default;
};

struct ExportParams {
  bool dedup_uk = true;
  bool verbalize_fallback = true;
  bool operator==(const ExportParams &) const = default;
};

enum class BackendKind { kStub, kHttp, kCache };

std::string_view backend_kind_name(BackendKind kind);
BackendKind parse_backend_kind(std::string_view name);

struct ScorerParams {
  BackendKind backend = BackendKind::kStub;
  std::string url = "http://127.0.0.1:8080";
  int timeout_ms = 30000;
  int retries = 3;
  int backoff_ms = 200;
  int max_in_flight = 4;
  int max_batch = 64;
  int embed_dim = 16;
  std::string cache_path;
  std::string fill_mask_fixture;
  bool operator==(const ScorerParams &) const = default;
};

struct PipelineConfig {
  std::uint64_t seed = 13;
  std::vector<EntitySpec> entities;
  std::vector<QueryTemplate> templates;
  // entity id -> subreddit names (without the "r/" prefix)
  std::map<std::string, std::vector<std::string>> subreddit_allowlist;
  ClusteringParams clustering;
  ExtractionParams extraction;
  AnalyticsParams analytics;
  EvalParams eval;
  ExportParams export_;
  ScorerParams scorer;

  bool operator==(const PipelineConfig &) const = default;

  const EntitySpec *find_entity(std::string_view id) const;
  const EntitySpec &entity(std::string_view id) const;  // throws DataError
};

// The shipped configuration: ten entities, fifteen query templates and the
// per-entity subreddit lists.
std::string_view default_config_json();
PipelineConfig default_config();

// Parses and validates. `source` names the document in error messages.
// Template errors carry the 1-based line of the offending pattern.
PipelineConfig parse_config(std::string_view json_text,
                            std::string_view source = "<config>");
PipelineConfig load_config(const std::filesystem::path &path);

// Canonical JSON form (stable key order, 2-space indent).
std::string serialize_config(const PipelineConfig &config);
// fnv1a64 hex digest of serialize_config.
std::string config_digest(const PipelineConfig &config);

// Throws ConfigError on the first violated invariant.
void validate_config(const PipelineConfig &config);
void validate_entity(const EntitySpec &entity);
void validate_template(const QueryTemplate &tmpl);

}  // namespace stereokg

#endif  // STEREOKG_CONFIG_H_
