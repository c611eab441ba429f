#include "stereokg/config.h"

#include <set>

#include "stereokg/errors.h"
#include "stereokg/hashing.h"
#include "stereokg/io.h"
#include "stereokg/text.h"

namespace stereokg {

using io::Json;

std::string_view entity_kind_name(EntityKind kind) {
  return kind == EntityKind::kReligion ? "religion" : "nationality";
}

std::string_view mask_term_for(EntityKind kind) {
  return kind == EntityKind::kReligion ? "religion" : "nation";
}

std::string_view backend_kind_name(BackendKind kind) {
  switch (kind) {
    case BackendKind::kStub: return "stub";
    case BackendKind::kHttp: return "http";
    case BackendKind::kCache: return "cache";
  }
  return "stub";
}

BackendKind parse_backend_kind(std::string_view name) {
  if (name == "stub") return BackendKind::kStub;
  if (name == "http") return BackendKind::kHttp;
  if (name == "cache") return BackendKind::kCache;
  throw ConfigError("unknown scorer backend '" + std::string(name) +
                    "' (expected stub|http|cache)");
}

const EntitySpec *PipelineConfig::find_entity(std::string_view id) const {
  for (const auto &e : entities) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const EntitySpec &PipelineConfig::entity(std::string_view id) const {
  const EntitySpec *e = find_entity(id);
  if (!e) throw DataError("unknown entity '" + std::string(id) + "'");
  return *e;
}

void validate_entity(const EntitySpec &e) {
  if (e.id.empty()) throw ConfigError("entity with empty id");
  if (e.id != text::to_lower(text::trim(e.id)) ||
      e.id.find(' ') != std::string::npos) {
    throw ConfigError("entity id '" + e.id + "' must be a lowercase key");
  }
  if (e.surface_forms.empty()) {
    throw ConfigError("entity '" + e.id + "' has no surface forms");
  }
  for (const auto &f : e.surface_forms) {
    if (f.empty() || f != text::to_lower(text::trim(f))) {
      throw ConfigError("entity '" + e.id + "': surface form '" + f +
                        "' must be lowercase and trimmed");
    }
  }
  if (e.mask_term != mask_term_for(e.kind)) {
    throw ConfigError("entity '" + e.id + "': mask_term '" + e.mask_term +
                      "' inconsistent with kind " +
                      std::string(entity_kind_name(e.kind)) + " (expected '" +
                      std::string(mask_term_for(e.kind)) + "')");
  }
}

void validate_template(const QueryTemplate &t) {
  std::size_t first = t.pattern.find(kSubjectPlaceholder);
  if (first == std::string::npos) {
    throw ConfigError("template '" + t.pattern + "' has no <SUB> placeholder");
  }
  if (t.pattern.find(kSubjectPlaceholder, first + 1) != std::string::npos) {
    throw ConfigError("template '" + t.pattern + "' has more than one <SUB>");
  }
  std::string lower = text::to_lower(text::trim(t.pattern));
  bool interrogative = text::starts_with_word(lower, "why") ||
                       text::starts_with_word(lower, "how") ||
                       text::starts_with_word(lower, "what");
  if (t.form == TemplateForm::kQuestion && !interrogative) {
    throw ConfigError("question template '" + t.pattern +
                      "' must begin with Why/How/What");
  }
  if (t.form == TemplateForm::kStatement && interrogative) {
    throw ConfigError("statement template '" + t.pattern +
                      "' must not begin with an interrogative word");
  }
}

void validate_config(const PipelineConfig &c) {
  std::set<std::string> ids;
  for (const auto &e : c.entities) {
    validate_entity(e);
    if (!ids.insert(e.id).second) {
      throw ConfigError("duplicate entity id '" + e.id + "'");
    }
  }
  for (const auto &t : c.templates) validate_template(t);
  for (const auto &[id, subs] : c.subreddit_allowlist) {
    if (!ids.count(id)) {
      throw ConfigError("subreddit_allowlist names unknown entity '" + id + "'");
    }
  }
  if (!(c.clustering.threshold >= 0.0 && c.clustering.threshold <= 1.0)) {
    throw ConfigError("clustering.threshold must lie in [0,1]");
  }
  if (c.clustering.min_size < 2) {
    throw ConfigError("clustering.min_size must be >= 2");
  }
  if (c.scorer.max_batch < 1 || c.scorer.max_in_flight < 1) {
    throw ConfigError("scorer.max_batch and scorer.max_in_flight must be >= 1");
  }
  if (c.scorer.embed_dim < 1) throw ConfigError("scorer.embed_dim must be >= 1");
  if (c.scorer.retries < 0) throw ConfigError("scorer.retries must be >= 0");
  if (c.eval.n_per_stratum < 1 || c.eval.n_duplicates < 0) {
    throw ConfigError("eval.n_per_stratum must be >= 1, n_duplicates >= 0");
  }
}

namespace {

std::size_t line_of(std::string_view doc, std::string_view needle) {
  std::size_t pos = doc.find(needle);
  if (pos == std::string_view::npos) return 0;
  std::size_t line = 1;
  for (std::size_t i = 0; i < pos; ++i) {
    if (doc[i] == '\n') ++line;
  }
  return line;
}

template <typename T>
T get_or(const Json &obj, const char *key, T fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

std::vector<std::string> string_list(const Json &obj, const char *key) {
  return get_or<std::vector<std::string>>(obj, key, {});
}

EntityKind parse_kind(const std::string &s) {
  if (s == "religion") return EntityKind::kReligion;
  if (s == "nationality") return EntityKind::kNationality;
  throw ConfigError("unknown entity kind '" + s + "'");
}

TemplateForm parse_form(const std::string &s) {
  if (s == "question") return TemplateForm::kQuestion;
  if (s == "statement") return TemplateForm::kStatement;
  throw ConfigError("unknown template form '" + s + "'");
}

SucAggregation parse_aggregation(const std::string &s) {
  if (s == "mean") return SucAggregation::kMean;
  if (s == "majority") return SucAggregation::kMajorityVote;
  throw ConfigError("unknown eval.aggregation '" + s + "' (mean|majority)");
}

}  // namespace

PipelineConfig parse_config(std::string_view json_text, std::string_view source) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::exception &e) {
    throw ConfigError(std::string(source) + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError(std::string(source) + ": config must be a JSON object");
  }

  PipelineConfig c;
  try {
    c.seed = get_or<std::uint64_t>(doc, "seed", c.seed);
    for (const auto &je : doc.value("entities", Json::array())) {
      EntitySpec e;
      e.id = je.at("id").get<std::string>();
      e.display_name = je.value("display_name", e.id);
      e.kind = parse_kind(je.at("kind").get<std::string>());
      e.surface_forms = je.at("surface_forms").get<std::vector<std::string>>();
      e.mask_term = je.value("mask_term", std::string(mask_term_for(e.kind)));
      c.entities.push_back(std::move(e));
    }
    for (const auto &jt : doc.value("templates", Json::array())) {
      QueryTemplate t;
      t.pattern = jt.at("pattern").get<std::string>();
      t.form = parse_form(jt.at("form").get<std::string>());
      try {
        validate_template(t);
      } catch (const ConfigError &err) {
        std::size_t line = line_of(json_text, Json(t.pattern).dump());
        throw ConfigError(std::string(source) + ":" + std::to_string(line) +
                          ": " + err.what());
      }
      c.templates.push_back(std::move(t));
    }
    if (doc.contains("subreddit_allowlist")) {
      c.subreddit_allowlist = doc.at("subreddit_allowlist")
                                  .get<std::map<std::string, std::vector<std::string>>>();
    }
    const Json cl = doc.value("clustering", Json::object());
    c.clustering.threshold = get_or(cl, "threshold", c.clustering.threshold);
    c.clustering.min_size = get_or(cl, "min_size", c.clustering.min_size);

    const Json ex = doc.value("extraction", Json::object());
    c.extraction.personal_pronouns = string_list(ex, "personal_pronouns");
    c.extraction.colloquialisms = string_list(ex, "colloquialisms");
    c.extraction.modalities = string_list(ex, "modalities");
    c.extraction.external_extractor_url =
        get_or<std::string>(ex, "external_extractor_url", "");

    const Json an = doc.value("analytics", Json::object());
    c.analytics.stopwords = string_list(an, "stopwords");
    c.analytics.top_k = get_or(an, "top_k", c.analytics.top_k);

    const Json ev = doc.value("eval", Json::object());
    c.eval.n_per_stratum = get_or(ev, "n_per_stratum", c.eval.n_per_stratum);
    c.eval.n_duplicates = get_or(ev, "n_duplicates", c.eval.n_duplicates);
    c.eval.aggregation =
        parse_aggregation(get_or<std::string>(ev, "aggregation", "mean"));

    const Json xp = doc.value("export", Json::object());
    c.export_.dedup_uk = get_or(xp, "dedup_uk", c.export_.dedup_uk);
    c.export_.verbalize_fallback =
        get_or(xp, "verbalize_fallback", c.export_.verbalize_fallback);

    const Json sc = doc.value("scorer", Json::object());
    c.scorer.backend = parse_backend_kind(get_or<std::string>(sc, "backend", "stub"));
    c.scorer.url = get_or(sc, "url", c.scorer.url);
    c.scorer.timeout_ms = get_or(sc, "timeout_ms", c.scorer.timeout_ms);
    c.scorer.retries = get_or(sc, "retries", c.scorer.retries);
    c.scorer.backoff_ms = get_or(sc, "backoff_ms", c.scorer.backoff_ms);
    c.scorer.max_in_flight = get_or(sc, "max_in_flight", c.scorer.max_in_flight);
    c.scorer.max_batch = get_or(sc, "max_batch", c.scorer.max_batch);
    c.scorer.embed_dim = get_or(sc, "embed_dim", c.scorer.embed_dim);
    c.scorer.cache_path = get_or<std::string>(sc, "cache_path", "");
    c.scorer.fill_mask_fixture = get_or<std::string>(sc, "fill_mask_fixture", "");
  } catch (const Json::exception &e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }

  try {
    validate_config(c);
  } catch (const ConfigError &err) {
    throw ConfigError(std::string(source) + ": " + err.what());
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path &path) {
  std::string content;
  try {
    content = io::read_file(path);
  } catch (const DataError &) {
    throw ConfigError("cannot read config file " + path.string());
  }
  return parse_config(content, path.string());
}

PipelineConfig default_config() {
  return parse_config(default_config_json(), "<default config>");
}

std::string serialize_config(const PipelineConfig &c) {
  Json doc;
  doc["seed"] = c.seed;
  Json ents = Json::array();
  for (const auto &e : c.entities) {
    Json je;
    je["id"] = e.id;
    je["display_name"] = e.display_name;
    je["kind"] = entity_kind_name(e.kind);
    je["surface_forms"] = e.surface_forms;
    je["mask_term"] = e.mask_term;
    ents.push_back(std::move(je));
  }
  doc["entities"] = std::move(ents);
  Json tmpls = Json::array();
  for (const auto &t : c.templates) {
    tmpls.push_back({{"pattern", t.pattern},
                     {"form", t.form == TemplateForm::kQuestion ? "question"
                                                                : "statement"}});
  }
  doc["templates"] = std::move(tmpls);
  Json allow = Json::object();
  for (const auto &[id, subs] : c.subreddit_allowlist) allow[id] = subs;
  doc["subreddit_allowlist"] = std::move(allow);
  doc["clustering"] = {{"threshold", c.clustering.threshold},
                       {"min_size", c.clustering.min_size}};
  doc["extraction"] = {{"personal_pronouns", c.extraction.personal_pronouns},
                       {"colloquialisms", c.extraction.colloquialisms},
                       {"modalities", c.extraction.modalities},
                       {"external_extractor_url", c.extraction.external_extractor_url}};
  doc["analytics"] = {{"stopwords", c.analytics.stopwords},
                      {"top_k", c.analytics.top_k}};
  doc["eval"] = {{"n_per_stratum", c.eval.n_per_stratum},
                 {"n_duplicates", c.eval.n_duplicates},
                 {"aggregation", c.eval.aggregation == SucAggregation::kMean
                                     ? "mean"
                                     : "majority"}};
  doc["export"] = {{"dedup_uk", c.export_.dedup_uk},
                   {"verbalize_fallback", c.export_.verbalize_fallback}};
  doc["scorer"] = {{"backend", backend_kind_name(c.scorer.backend)},
                   {"url", c.scorer.url},
                   {"timeout_ms", c.scorer.timeout_ms},
                   {"retries", c.scorer.retries},
                   {"backoff_ms", c.scorer.backoff_ms},
                   {"max_in_flight", c.scorer.max_in_flight},
                   {"max_batch", c.scorer.max_batch},
                   {"embed_dim", c.scorer.embed_dim},
                   {"cache_path", c.scorer.cache_path},
                   {"fill_mask_fixture", c.scorer.fill_mask_fixture}};
  return doc.dump(2) + "\n";
}

std::string config_digest(const PipelineConfig &config) {
  return hex64(fnv1a64(serialize_config(config)));
}

}  // namespace stereokg
