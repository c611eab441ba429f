// stereokg: command-line front end for the knowledge-graph pipeline.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error,
// 3 scorer backend error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "stereokg/analytics.h"
#include "stereokg/config.h"
#include "stereokg/errors.h"
#include "stereokg/eval.h"
#include "stereokg/io.h"
#include "stereokg/kg.h"
#include "stereokg/knowledge_export.h"
#include "stereokg/pipeline.h"
#include "stereokg/scorer.h"
#include "stereokg/scorer_server.h"
#include "stereokg/text.h"

namespace fs = std::filesystem;
using namespace stereokg;

namespace {

// Flags shared by every subcommand.
struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string backend;
  std::optional<double> threshold;
  std::optional<int> min_size;
  std::string manifest;
  std::string in;
  std::string out;
};

void add_common(CLI::App *cmd, CommonFlags &f) {
  cmd->add_option("--config", f.config_path, "Pipeline configuration JSON");
  cmd->add_option("--seed", f.seed, "Override the configured seed");
  cmd->add_option("--backend", f.backend, "Scorer backend: stub|http|cache")
      ->check(CLI::IsMember({"stub", "http", "cache"}));
  cmd->add_option("--manifest", f.manifest,
                  "Run manifest that must match the current config and seed");
}

PipelineConfig resolve_config(const CommonFlags &f) {
  PipelineConfig config = f.config_path.empty() ? default_config() : load_config(f.config_path);
  if (f.seed) config.seed = *f.seed;
  if (!f.backend.empty()) config.scorer.backend = parse_backend_kind(f.backend);
  if (f.threshold) config.clustering.threshold = *f.threshold;
  if (f.min_size) config.clustering.min_size = *f.min_size;
  validate_config(config);
  if (!f.manifest.empty()) check_manifest_matches(config, f.manifest);
  return config;
}

std::vector<KgEntry> load_checked_kg(const PipelineConfig &config, const fs::path &path) {
  io::require_file(path, "KG");
  KgValidation validation{&config.entities, FilterLexicons::from_params(config.extraction)};
  return load_kg(path, &validation);
}

fs::path sidecar_path(const fs::path &corpus) {
  fs::path p = corpus;
  return p.replace_extension(".jsonl");
}

void print_stage(const StageRecord &r) {
  std::cout << r.name << ": " << r.count_in << " in, " << r.count_out << " out\n";
  for (const auto &[reason, n] : r.drops) std::cout << "  dropped " << n << " (" << reason << ")\n";
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Build, analyze and export a cultural-knowledge and stereotype KG"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));
  CommonFlags f;

  auto *ingest = app.add_subcommand("ingest", "Load a JSONL dump and apply the channel allowlist");
  add_common(ingest, f);
  ingest->add_option("--in", f.in, "Raw JSONL dump")->required();
  ingest->add_option("--out", f.out, "Run directory")->required();

  auto *mine_cmd = app.add_subcommand("mine", "Match query templates and convert to statements");
  auto *cluster_cmd = app.add_subcommand("cluster", "Group mined assertions into communities");
  auto *extract_cmd = app.add_subcommand("extract", "Extract, filter and rank triples per cluster");
  auto *build_cmd = app.add_subcommand("build-kg", "Assemble the knowledge graph");
  for (auto *cmd : {mine_cmd, cluster_cmd, extract_cmd, build_cmd}) {
    add_common(cmd, f);
    cmd->add_option("--in", f.in, "Run directory holding upstream artifacts")->required();
    cmd->add_option("--out", f.out, "Output directory (defaults to --in)");
  }
  cluster_cmd->add_option("--threshold", f.threshold, "Cosine similarity threshold");
  cluster_cmd->add_option("--min-size", f.min_size, "Minimum community size");

  auto *analyze = app.add_subcommand("analyze", "KG analytics");
  analyze->require_subcommand(1);
  auto *sentiment_cmd = analyze->add_subcommand("sentiment", "Masked sentiment distribution");
  auto *pmi_cmd = analyze->add_subcommand("pmi", "Entity/token association scores");
  std::string summary_path;
  std::optional<int> top_k;
  for (auto *cmd : {sentiment_cmd, pmi_cmd}) {
    add_common(cmd, f);
    cmd->add_option("--in", f.in, "KG file (kg.jsonl)")->required();
    cmd->add_option("--out", f.out, "Report TSV")->required();
  }
  pmi_cmd->add_option("--summary", summary_path, "Per-entity top-token summary TSV");
  pmi_cmd->add_option("--k", top_k, "Tokens per entity in the summary");

  auto *eval = app.add_subcommand("eval", "Human evaluation and masked-probe accuracy");
  eval->require_subcommand(1);
  auto *sample_cmd = eval->add_subcommand("sample", "Sample an annotation sheet from the KG");
  auto *suc_cmd = eval->add_subcommand("suc", "Success rate from annotation responses");
  auto *agree_cmd = eval->add_subcommand("agreement", "Observed and intra-annotator agreement");
  auto *acc_cmd = eval->add_subcommand("acc5", "Top-k accuracy of fill-mask predictions");
  auto *annotate_cmd = eval->add_subcommand("annotate", "Annotate a sheet interactively");
  std::optional<int> n_per_stratum, n_duplicates;
  std::string sheet_path, kg_path, predictions_path, annotator, aggregation;
  int k = 5;
  for (auto *cmd : {sample_cmd, suc_cmd, agree_cmd, acc_cmd, annotate_cmd}) add_common(cmd, f);
  sample_cmd->add_option("--in", f.in, "KG file")->required();
  sample_cmd->add_option("--out", f.out, "Annotation sheet CSV")->required();
  sample_cmd->add_option("--n-per-stratum", n_per_stratum, "Entries per derivation stratum");
  sample_cmd->add_option("--n-duplicates", n_duplicates, "Items shown twice");
  suc_cmd->add_option("--in", f.in, "Responses CSV")->required();
  suc_cmd->add_option("--sheet", sheet_path, "Annotation sheet CSV")->required();
  suc_cmd->add_option("--kg", kg_path, "KG file (resolves derivation strata)")->required();
  suc_cmd->add_option("--aggregation", aggregation, "mean|majority")
      ->check(CLI::IsMember({"mean", "majority"}));
  agree_cmd->add_option("--in", f.in, "Responses CSV")->required();
  agree_cmd->add_option("--sheet", sheet_path, "Annotation sheet CSV")->required();
  acc_cmd->add_option("--in", f.in, "Probe JSONL")->required();
  acc_cmd->add_option("--predictions", predictions_path,
                      "Prediction JSONL; omitted: query the scorer's fill-mask");
  acc_cmd->add_option("--out", f.out, "Write the predictions used to this JSONL");
  acc_cmd->add_option("--k", k, "Cut-off rank")->check(CLI::PositiveNumber);
  annotate_cmd->add_option("--in", f.in, "Annotation sheet CSV")->required();
  annotate_cmd->add_option("--out", f.out, "Responses CSV (appended)")->required();
  annotate_cmd->add_option("--annotator", annotator, "Annotator id")->required();

  auto *export_cmd = app.add_subcommand("export", "Knowledge corpora and dataset splits");
  export_cmd->require_subcommand(1);
  auto *uk_cmd = export_cmd->add_subcommand("uk", "Unstructured knowledge corpus");
  auto *sk_cmd = export_cmd->add_subcommand("sk", "Structured (verbalized) knowledge corpus");
  auto *splits_cmd = export_cmd->add_subcommand("splits", "Seeded split manifest");
  std::optional<bool> dedup;
  std::string stereotypes_path, dataset;
  for (auto *cmd : {uk_cmd, sk_cmd, splits_cmd}) add_common(cmd, f);
  for (auto *cmd : {uk_cmd, sk_cmd}) {
    cmd->add_option("--in", f.in, "KG file")->required();
    cmd->add_option("--out", f.out, "Corpus text file; sidecar written next to it as .jsonl")
        ->required();
  }
  uk_cmd->add_option("--dedup", dedup, "Deduplicate sentences across entries (true|false)");
  splits_cmd->add_option("--in", f.in, "Label CSV: id,label[,split]")->required();
  splits_cmd->add_option("--out", f.out, "Manifest JSON")->required();
  splits_cmd->add_option("--stereotypes", stereotypes_path, "File with one stereotype id per line");
  splits_cmd->add_option("--dataset", dataset, "Dataset name")->required();

  auto *run_all_cmd = app.add_subcommand("run-all", "Run every stage and write a run manifest");
  add_common(run_all_cmd, f);
  run_all_cmd->add_option("--in", f.in, "Raw JSONL dump")->required();
  run_all_cmd->add_option("--out", f.out, "Run directory")->required();
  run_all_cmd->add_option("--threshold", f.threshold, "Cosine similarity threshold");
  run_all_cmd->add_option("--min-size", f.min_size, "Minimum community size");
  std::string record_path;
  bool force = false;
  run_all_cmd->add_option("--record", record_path, "Record scorer answers to a cache file");
  run_all_cmd->add_flag("--force", force, "Overwrite a run made with another config or seed");

  auto *serve_cmd = app.add_subcommand("serve-stub", "Serve the stub scorer over HTTP");
  add_common(serve_cmd, f);
  std::string host = "127.0.0.1";
  int port = 8080;
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port (0 picks a free one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const PipelineConfig config = resolve_config(f);
    const fs::path in(f.in);
    const fs::path out = f.out.empty() ? in : fs::path(f.out);
    auto gateway = [&config] { return make_gateway(config, make_backend(config)); };

    if (*ingest) {
      print_stage(stage_ingest(config, in, out));
    } else if (*mine_cmd) {
      print_stage(stage_mine(config, in, out));
    } else if (*cluster_cmd) {
      print_stage(stage_cluster(config, gateway(), in, out));
    } else if (*extract_cmd) {
      print_stage(stage_extract(config, gateway(), in, out));
    } else if (*build_cmd) {
      print_stage(stage_build_kg(config, in, out));
    } else if (*sentiment_cmd) {
      io::require_file(in, "KG");
      write_sentiment_report(config, gateway(), in, out);
      std::cout << io::read_file(out);
    } else if (*pmi_cmd) {
      io::require_file(in, "KG");
      PipelineConfig c = config;
      if (top_k) c.analytics.top_k = *top_k;
      write_association_report(c, in, out, summary_path);
      if (!summary_path.empty()) std::cout << io::read_file(summary_path);
    } else if (*sample_cmd) {
      const auto kg = load_checked_kg(config, in);
      const auto items =
          sample_eval_set(kg, n_per_stratum.value_or(config.eval.n_per_stratum),
                          n_duplicates.value_or(config.eval.n_duplicates), config.seed);
      io::write_file(out, format_sheet(items));
      std::cout << "wrote " << items.size() << " items to " << out.string() << "\n";
    } else if (*suc_cmd) {
      const auto kg = load_checked_kg(config, kg_path);
      const auto items = parse_sheet(io::read_file(sheet_path), &kg);
      const auto records = parse_responses(io::read_file(in));
      SucAggregation agg = config.eval.aggregation;
      if (aggregation == "mean") agg = SucAggregation::kMean;
      if (aggregation == "majority") agg = SucAggregation::kMajorityVote;
      const SucResult s = success_rate(items, records, agg);
      std::cout << "SUC all: " << pct(s.suc_all) << " (" << s.successes_all << "/"
                << s.items_all << ")\n"
                << "SUC SD:  " << pct(s.suc_sd) << " (" << s.successes_sd << "/"
                << s.items_sd << ")\n"
                << "SUC CD:  " << pct(s.suc_cd) << " (" << s.successes_cd << "/"
                << s.items_cd << ")\n";
    } else if (*agree_cmd) {
      const auto items = parse_sheet(io::read_file(sheet_path));
      const auto records = parse_responses(io::read_file(in));
      for (Metric m : kAllMetrics) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3f", observed_agreement(records, m));
        std::cout << "OA " << metric_name(m) << ": " << buf << "\n";
      }
      bool has_dups = false;
      for (const auto &i : items) has_dups = has_dups || i.duplicate_of.has_value();
      if (has_dups) {
        for (const auto &[a, v] : intra_consistency(records, items)) {
          char buf[64];
          std::snprintf(buf, sizeof(buf), "%.3f", v);
          std::cout << "intra " << a << ": " << buf << "\n";
        }
      }
    } else if (*acc_cmd) {
      const auto probes = parse_probes(io::read_file(in));
      std::map<int, std::vector<std::string>> predictions;
      if (!predictions_path.empty()) {
        predictions = parse_predictions(io::read_file(predictions_path));
      } else {
        std::vector<std::string> texts;
        for (const auto &p : probes) texts.push_back(p.masked);
        const auto topk = gateway().fill_mask(texts, k);
        for (std::size_t i = 0; i < probes.size(); ++i) {
          predictions[probes[i].probe_id] = topk[i];
        }
      }
      if (!f.out.empty()) io::write_file(f.out, format_predictions(predictions));
      const AccResult r = acc_at_k(probes, predictions, k);
      std::cout << "ACC@" << k << ": " << pct(r.accuracy) << " (" << r.hits << "/" << r.probes
                << ")\n";
    } else if (*annotate_cmd) {
      const auto items = parse_sheet(io::read_file(in));
      auto records = annotate(items, annotator, std::cin, std::cout);
      std::vector<AnnotationRecord> all;
      if (fs::exists(out)) all = parse_responses(io::read_file(out));
      all.insert(all.end(), records.begin(), records.end());
      io::write_file(out, format_responses(all));
    } else if (*uk_cmd) {
      const auto kg = load_checked_kg(config, in);
      const auto corpus = export_uk(kg, dedup.value_or(config.export_.dedup_uk));
      io::write_file(out, format_corpus(corpus));
      io::write_file(sidecar_path(out), format_corpus_sidecar(corpus));
      std::cout << "wrote " << corpus.sentences.size() << " sentences to " << out.string()
                << "\n";
    } else if (*sk_cmd) {
      const auto kg = load_checked_kg(config, in);
      const auto g = gateway();
      const auto sk = export_sk(kg, &g, config.export_.verbalize_fallback);
      io::write_file(out, format_corpus(sk.corpus));
      io::write_file(sidecar_path(out), format_corpus_sidecar(sk.corpus));
      std::cout << "wrote " << sk.corpus.sentences.size() << " sentences to " << out.string()
                << " (" << sk.fallback << " via fallback, " << sk.skipped << " skipped)\n";
    } else if (*splits_cmd) {
      io::require_file(in, "label file");
      std::vector<std::string> stereotypes;
      if (!stereotypes_path.empty()) {
        for (const auto &line : io::read_lines(stereotypes_path)) {
          std::string id = text::trim(line);
          if (!id.empty()) stereotypes.push_back(id);
        }
      }
      const auto manifest = build_split_manifest(dataset, parse_labels(io::read_file(in)),
                                                 stereotypes, config.seed);
      io::write_file(out, format_split_manifest(manifest));
      std::cout << "train " << manifest.train.size() << ", dev " << manifest.dev.size()
                << ", test " << manifest.test.size() << ", stereotype test "
                << manifest.stereotype_test.size() << "\n";
    } else if (*run_all_cmd) {
      const RunManifest m = run_all(config, in, out, {record_path, force});
      for (const auto &s : m.stages) print_stage(s);
      std::cout << "manifest: " << (out / artifacts::kManifest).string() << "\n";
    } else if (*serve_cmd) {
      ScorerServer server(make_backend(config));
      std::cout << "serving stub scorer on " << host << ":" << port << std::endl;
      server.listen(host, port);
    }
  } catch (const Error &e) {
    std::cerr << "stereokg: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception &e) {
    std::cerr << "stereokg: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::kData);
  }
  return 0;
}
