#include "stereokg/pipeline.h"

#include <chrono>
#include <cstdlib>
#include <set>

#include "stereokg/analytics.h"
#include "stereokg/clustering.h"
#include "stereokg/errors.h"
#include "stereokg/ingest.h"
#include "stereokg/io.h"
#include "stereokg/kg.h"
#include "stereokg/knowledge_export.h"
#include "stereokg/mining.h"
#include "stereokg/triples.h"

namespace stereokg {

namespace fs = std::filesystem;
using io::Json;

std::string_view tool_version() { return STEREOKG_VERSION; }

void check_telescoping(const RunManifest &manifest) {
  for (std::size_t i = 1; i < manifest.stages.size(); ++i) {
    const auto &prev = manifest.stages[i - 1];
    const auto &cur = manifest.stages[i];
    if (prev.count_out != cur.count_in) {
      throw DataError("stage counts do not telescope: " + prev.name + " produced " +
                      std::to_string(prev.count_out) + ", " + cur.name + " consumed " +
                      std::to_string(cur.count_in));
    }
  }
}

std::string format_manifest(const RunManifest &m) {
  Json j;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["tool_version"] = m.tool_version;
  j["backend"] = m.backend;
  Json stages = Json::array();
  for (const auto &s : m.stages) {
    Json drops = Json::object();
    for (const auto &[reason, n] : s.drops) drops[reason] = n;
    stages.push_back({{"name", s.name},
                      {"inputs", s.inputs},
                      {"outputs", s.outputs},
                      {"count_in", s.count_in},
                      {"count_out", s.count_out},
                      {"drops", drops}});
  }
  j["stages"] = std::move(stages);
  return j.dump(2) + '\n';
}

RunManifest parse_manifest(std::string_view content) {
  RunManifest m;
  try {
    Json j = Json::parse(content);
    m.config_hash = j.at("config_hash").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.tool_version = j.value("tool_version", std::string());
    m.backend = j.value("backend", std::string());
    for (const auto &s : j.value("stages", Json::array())) {
      StageRecord r;
      r.name = s.at("name").get<std::string>();
      r.inputs = s.value("inputs", std::vector<std::string>{});
      r.outputs = s.value("outputs", std::vector<std::string>{});
      r.count_in = s.at("count_in").get<std::size_t>();
      r.count_out = s.at("count_out").get<std::size_t>();
      const Json drops = s.value("drops", Json::object());
      for (const auto &[reason, n] : drops.items()) {
        r.drops[reason] = n.get<std::size_t>();
      }
      m.stages.push_back(std::move(r));
    }
  } catch (const Json::exception &e) {
    throw DataError(std::string("malformed run manifest: ") + e.what());
  }
  return m;
}

std::string format_timings(const RunManifest &m) {
  Json j = Json::object();
  for (const auto &s : m.stages) j[s.name] = s.wall_ms;
  return j.dump(2) + '\n';
}

std::shared_ptr<ScorerBackend> make_backend(const PipelineConfig &config,
                                            const std::string &record_path) {
  const ScorerParams &p = config.scorer;
  std::shared_ptr<ScorerBackend> backend;
  switch (p.backend) {
    case BackendKind::kStub: {
      StubOptions options;
      options.seed = config.seed;
      options.embed_dim = p.embed_dim;
      if (!p.fill_mask_fixture.empty()) {
        options.fill_mask_fixture = load_fill_mask_fixture(p.fill_mask_fixture);
      }
      backend = std::make_shared<StubBackend>(std::move(options));
      break;
    }
    case BackendKind::kHttp: {
      HttpOptions options;
      options.url = p.url;
      if (const char *env = std::getenv("STEREOKG_SCORER_URL"); env && *env) {
        options.url = env;
      }
      options.timeout_ms = p.timeout_ms;
      options.retries = p.retries;
      options.backoff_ms = p.backoff_ms;
      options.max_in_flight = p.max_in_flight;
      backend = std::make_shared<HttpBackend>(std::move(options));
      break;
    }
    case BackendKind::kCache:
      if (p.cache_path.empty()) throw ConfigError("cache backend needs scorer.cache_path");
      backend = std::make_shared<FileCacheBackend>(p.cache_path);
      break;
  }
  if (!record_path.empty()) {
    backend = std::make_shared<RecordingBackend>(backend, record_path);
  }
  return backend;
}

ScorerGateway make_gateway(const PipelineConfig &config,
                           std::shared_ptr<ScorerBackend> backend) {
  GatewayOptions options;
  options.max_batch = static_cast<std::size_t>(config.scorer.max_batch);
  options.max_parallel = static_cast<std::size_t>(std::max(config.scorer.max_in_flight, 1));
  return ScorerGateway(std::move(backend), options);
}

namespace {

fs::path upstream(const fs::path &dir, const char *name) {
  fs::path p = dir / name;
  io::require_file(p, name);
  return p;
}

KgValidation kg_validation(const PipelineConfig &config) {
  return {&config.entities, FilterLexicons::from_params(config.extraction)};
}

}  // namespace

StageRecord stage_ingest(const PipelineConfig &config, const fs::path &dump,
                         const fs::path &out_dir) {
  io::require_file(dump, "dump");
  DumpContents contents = load_dump(dump);
  AllowlistResult allowed = apply_allowlist(std::move(contents.posts), config);
  io::write_file(out_dir / artifacts::kPosts, format_dump(allowed.kept));

  StageRecord r;
  r.name = "ingest";
  r.inputs = {dump.filename().string()};
  r.outputs = {artifacts::kPosts};
  r.count_in = contents.report.lines_read;
  r.count_out = allowed.kept.size();
  for (const auto &s : contents.report.skipped) ++r.drops[s.reason];
  if (allowed.dropped) r.drops["channel not allowlisted"] = allowed.dropped;
  return r;
}

StageRecord stage_mine(const PipelineConfig &config, const fs::path &in_dir,
                       const fs::path &out_dir) {
  DumpContents posts = load_dump(upstream(in_dir, artifacts::kPosts));
  MiningReport report;
  auto mined = mine(posts.posts, config.entities, config.templates, &report);
  io::write_file(out_dir / artifacts::kMined, format_mined(mined));

  StageRecord r;
  r.name = "mine";
  r.inputs = {artifacts::kPosts};
  r.outputs = {artifacts::kMined};
  r.count_in = posts.posts.size();
  r.count_out = mined.size();
  if (report.conversion_failed) r.drops["conversion failed"] = report.conversion_failed;
  if (report.duplicates_in_post) r.drops["duplicate in post"] = report.duplicates_in_post;
  return r;
}

StageRecord stage_cluster(const PipelineConfig &config, const ScorerGateway &gateway,
                          const fs::path &in_dir, const fs::path &out_dir) {
  auto mined = load_mined(upstream(in_dir, artifacts::kMined), config.templates);
  ClusteringReport report;
  auto clusters = cluster_assertions(mined, gateway, config.clustering, &report);
  io::write_file(out_dir / artifacts::kClusters, format_clusters(clusters));

  StageRecord r;
  r.name = "cluster";
  r.inputs = {artifacts::kMined};
  r.outputs = {artifacts::kClusters};
  r.count_in = mined.size();
  r.count_out = clusters.size();
  return r;
}

StageRecord stage_extract(const PipelineConfig &config, const ScorerGateway &gateway,
                          const fs::path &in_dir, const fs::path &out_dir) {
  auto mined = load_mined(upstream(in_dir, artifacts::kMined), config.templates);
  auto clusters = load_clusters(upstream(in_dir, artifacts::kClusters));
  std::unique_ptr<ExternalExtractor> external;
  if (!config.extraction.external_extractor_url.empty()) {
    external = std::make_unique<HttpExtractor>(config.extraction.external_extractor_url,
                                               config.scorer.timeout_ms);
  }
  ExtractionReport report;
  auto reps =
      extract_representatives(mined, clusters, config, gateway, external.get(), &report);
  io::write_file(out_dir / artifacts::kRepresentatives, format_representatives(reps));
  io::write_file(out_dir / artifacts::kTriples, format_triples_tsv(reps));

  StageRecord r;
  r.name = "extract";
  r.inputs = {artifacts::kMined, artifacts::kClusters};
  r.outputs = {artifacts::kRepresentatives, artifacts::kTriples};
  r.count_in = clusters.size();
  r.count_out = reps.size();
  if (report.unrepresentable) r.drops["cluster unrepresentable"] = report.unrepresentable;
  if (report.filter.dropped_pronoun) r.drops["triple: personal pronoun"] = report.filter.dropped_pronoun;
  if (report.filter.dropped_no_entity) r.drops["triple: entity not in subject"] = report.filter.dropped_no_entity;
  if (report.filter.dropped_emptied) r.drops["triple: emptied by cleanup"] = report.filter.dropped_emptied;
  if (report.statements_without_triple) r.drops["statement without triple"] = report.statements_without_triple;
  return r;
}

StageRecord stage_build_kg(const PipelineConfig &config, const fs::path &in_dir,
                           const fs::path &out_dir) {
  auto mined = load_mined(upstream(in_dir, artifacts::kMined), config.templates);
  auto clusters = load_clusters(upstream(in_dir, artifacts::kClusters));
  auto reps = load_representatives(upstream(in_dir, artifacts::kRepresentatives));
  BuildReport report;
  auto kg = build_kg(mined, clusters, reps, &report);
  const KgValidation validation = kg_validation(config);
  for (const auto &e : kg) validate_entry(e, &validation);
  save_kg(kg, out_dir / artifacts::kKg);
  io::write_file(out_dir / artifacts::kKgTsv, format_kg_tsv(kg));

  StageRecord r;
  r.name = "build-kg";
  r.inputs = {artifacts::kMined, artifacts::kClusters, artifacts::kRepresentatives};
  r.outputs = {artifacts::kKg, artifacts::kKgTsv};
  r.count_in = reps.size();
  r.count_out = kg.size();
  return r;
}

void write_sentiment_report(const PipelineConfig &config, const ScorerGateway &gateway,
                            const fs::path &kg_path, const fs::path &out_path) {
  const KgValidation validation = kg_validation(config);
  auto kg = load_kg(kg_path, &validation);
  io::write_file(out_path, format_sentiment_tsv(sentiment_distribution(kg, config, gateway)));
}

void write_association_report(const PipelineConfig &config, const fs::path &kg_path,
                              const fs::path &out_path, const fs::path &summary_path) {
  const KgValidation validation = kg_validation(config);
  auto kg = load_kg(kg_path, &validation);
  const std::set<std::string> stopwords(config.analytics.stopwords.begin(),
                                        config.analytics.stopwords.end());
  auto table = association(kg, stopwords);
  io::write_file(out_path, format_association_tsv(table));
  if (!summary_path.empty()) {
    io::write_file(summary_path,
                   format_summary(table, stats(kg), config,
                                  static_cast<std::size_t>(config.analytics.top_k)));
  }
}

StageRecord stage_analyze(const PipelineConfig &config, const ScorerGateway &gateway,
                          const fs::path &in_dir, const fs::path &out_dir) {
  const fs::path kg_path = upstream(in_dir, artifacts::kKg);
  const KgValidation validation = kg_validation(config);
  const auto kg = load_kg(kg_path, &validation);

  StageRecord r;
  r.name = "analyze";
  r.inputs = {artifacts::kKg};
  r.outputs = {artifacts::kSentiment};
  r.count_in = kg.size();
  r.count_out = kg.size();
  write_sentiment_report(config, gateway, kg_path, out_dir / artifacts::kSentiment);
  try {
    write_association_report(config, kg_path, out_dir / artifacts::kAssociation,
                             out_dir / artifacts::kSummary);
    r.outputs.push_back(artifacts::kAssociation);
    r.outputs.push_back(artifacts::kSummary);
  } catch (const EmptyCorpus &) {
    // A KG without predicate/object tokens has no association table.
    r.drops["association: no tokens"] = kg.size();
  }
  return r;
}

StageRecord stage_export(const PipelineConfig &config, const ScorerGateway &gateway,
                         const fs::path &in_dir, const fs::path &out_dir) {
  const KgValidation validation = kg_validation(config);
  const auto kg = load_kg(upstream(in_dir, artifacts::kKg), &validation);

  StageRecord r;
  r.name = "export";
  r.inputs = {artifacts::kKg};
  r.count_in = kg.size();
  const KnowledgeCorpus uk = export_uk(kg, config.export_.dedup_uk);
  io::write_file(out_dir / artifacts::kUk, format_corpus(uk));
  io::write_file(out_dir / artifacts::kUkSidecar, format_corpus_sidecar(uk));
  r.outputs = {artifacts::kUk, artifacts::kUkSidecar};
  if (kg.empty()) return r;
  const SkExport sk = export_sk(kg, &gateway, config.export_.verbalize_fallback);
  io::write_file(out_dir / artifacts::kSk, format_corpus(sk.corpus));
  io::write_file(out_dir / artifacts::kSkSidecar, format_corpus_sidecar(sk.corpus));
  r.outputs.push_back(artifacts::kSk);
  r.outputs.push_back(artifacts::kSkSidecar);
  r.count_out = sk.corpus.sentences.size();
  if (sk.skipped) r.drops["sk: scorer failure"] = sk.skipped;
  return r;
}

void check_manifest_matches(const PipelineConfig &config, const fs::path &path) {
  const RunManifest m = parse_manifest(io::read_file(path));
  const std::string digest = config_digest(config);
  if (m.config_hash != digest) {
    throw ConfigError("config mismatch with " + path.string() + ": manifest has " +
                      m.config_hash + ", current config is " + digest);
  }
  if (m.seed != config.seed) {
    throw ConfigError("seed mismatch with " + path.string() + ": manifest has " +
                      std::to_string(m.seed) + ", current seed is " +
                      std::to_string(config.seed));
  }
}

RunManifest run_all(const PipelineConfig &config, const fs::path &dump,
                    const fs::path &out_dir, const RunOptions &options) {
  const fs::path manifest_path = out_dir / artifacts::kManifest;
  if (!options.force && fs::exists(manifest_path)) {
    check_manifest_matches(config, manifest_path);
  }
  fs::create_directories(out_dir);
  auto backend = make_backend(config, options.record_path);
  const ScorerGateway gateway = make_gateway(config, backend);

  RunManifest m;
  m.config_hash = config_digest(config);
  m.seed = config.seed;
  m.tool_version = std::string(tool_version());
  m.backend = std::string(backend_kind_name(config.scorer.backend));

  auto timed = [&](auto &&fn) {
    const auto start = std::chrono::steady_clock::now();
    StageRecord r = fn();
    r.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    m.stages.push_back(std::move(r));
  };
  timed([&] { return stage_ingest(config, dump, out_dir); });
  timed([&] { return stage_mine(config, out_dir, out_dir); });
  timed([&] { return stage_cluster(config, gateway, out_dir, out_dir); });
  timed([&] { return stage_extract(config, gateway, out_dir, out_dir); });
  timed([&] { return stage_build_kg(config, out_dir, out_dir); });
  timed([&] { return stage_analyze(config, gateway, out_dir, out_dir); });
  timed([&] { return stage_export(config, gateway, out_dir, out_dir); });

  check_telescoping(m);
  io::write_file(manifest_path, format_manifest(m));
  io::write_file(out_dir / artifacts::kTimings, format_timings(m));
  return m;
}

}  // namespace stereokg
