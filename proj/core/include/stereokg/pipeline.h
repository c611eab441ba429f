#ifndef STEREOKG_PIPELINE_H_
#define STEREOKG_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stereokg/config.h"
#include "stereokg/scorer.h"

namespace stereokg {

std::string_view tool_version();

// Artifact file names inside a run directory.
namespace artifacts {
inline constexpr char kPosts[] = "posts.jsonl";
inline constexpr char kMined[] = "mined.jsonl";
inline constexpr char kClusters[] = "clusters.jsonl";
inline constexpr char kRepresentatives[] = "representatives.jsonl";
inline constexpr char kTriples[] = "triples.tsv";
inline constexpr char kKg[] = "kg.jsonl";
inline constexpr char kKgTsv[] = "kg.tsv";
inline constexpr char kSentiment[] = "sentiment.tsv";
inline constexpr char kAssociation[] = "association.tsv";
inline constexpr char kSummary[] = "summary.tsv";
inline constexpr char kUk[] = "uk.txt";
inline constexpr char kUkSidecar[] = "uk.jsonl";
inline constexpr char kSk[] = "sk.txt";
inline constexpr char kSkSidecar[] = "sk.jsonl";
inline constexpr char kManifest[] = "manifest.json";
inline constexpr char kTimings[] = "timings.json";
}  // namespace artifacts

struct StageRecord {
  std::string name;
  std::vector<std::string> inputs;   // file names, no directories
  std::vector<std::string> outputs;
  std::size_t count_in = 0;
  std::size_t count_out = 0;
  std::map<std::string, std::size_t> drops;  // reason -> count
  double wall_ms = 0.0;  // reported in timings.json, not the manifest

  bool operator==(const StageRecord &) const = default;
};

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string backend;
  std::vector<StageRecord> stages;
};

// Stage N's count_out must equal stage N+1's count_in. Throws DataError.
void check_telescoping(const RunManifest &manifest);

// Deterministic: wall times are left out.
std::string format_manifest(const RunManifest &manifest);
RunManifest parse_manifest(std::string_view content);
std::string format_timings(const RunManifest &manifest);

// Builds the configured backend. STEREOKG_SCORER_URL overrides the http
// endpoint. A non-empty record_path wraps the backend in a recorder.
std::shared_ptr<ScorerBackend> make_backend(const PipelineConfig &config,
                                            const std::string &record_path = "");
ScorerGateway make_gateway(const PipelineConfig &config,
                           std::shared_ptr<ScorerBackend> backend);

// Each stage reads its upstream artifacts from `in_dir` (the raw dump file
// for ingest) and writes its artifacts into `out_dir`. A missing upstream
// artifact is a DataError naming the expected file.
StageRecord stage_ingest(const PipelineConfig &config, const std::filesystem::path &dump,
                         const std::filesystem::path &out_dir);
StageRecord stage_mine(const PipelineConfig &config, const std::filesystem::path &in_dir,
                       const std::filesystem::path &out_dir);
StageRecord stage_cluster(const PipelineConfig &config, const ScorerGateway &gateway,
                          const std::filesystem::path &in_dir,
                          const std::filesystem::path &out_dir);
StageRecord stage_extract(const PipelineConfig &config, const ScorerGateway &gateway,
                          const std::filesystem::path &in_dir,
                          const std::filesystem::path &out_dir);
StageRecord stage_build_kg(const PipelineConfig &config, const std::filesystem::path &in_dir,
                           const std::filesystem::path &out_dir);
StageRecord stage_analyze(const PipelineConfig &config, const ScorerGateway &gateway,
                          const std::filesystem::path &in_dir,
                          const std::filesystem::path &out_dir);
StageRecord stage_export(const PipelineConfig &config, const ScorerGateway &gateway,
                         const std::filesystem::path &in_dir,
                         const std::filesystem::path &out_dir);

// Individual analyses used by both stage_analyze and the CLI.
void write_sentiment_report(const PipelineConfig &config, const ScorerGateway &gateway,
                            const std::filesystem::path &kg_path,
                            const std::filesystem::path &out_path);
void write_association_report(const PipelineConfig &config,
                              const std::filesystem::path &kg_path,
                              const std::filesystem::path &out_path,
                              const std::filesystem::path &summary_path = {});

struct RunOptions {
  std::string record_path;  // optional scorer recording
  bool force = false;       // overwrite a run made with another config or seed
};

// ingest -> mine -> cluster -> extract -> build-kg -> analyze -> export,
// then manifest.json and timings.json. An existing manifest in out_dir with
// a different config hash or seed is a ConfigError unless forced.
RunManifest run_all(const PipelineConfig &config, const std::filesystem::path &dump,
                    const std::filesystem::path &out_dir, const RunOptions &options = {});

// Throws ConfigError if the manifest at `path` was produced by another
// config or seed.
void check_manifest_matches(const PipelineConfig &config, const std::filesystem::path &path);

}  // namespace stereokg

#endif  // STEREOKG_PIPELINE_H_
