#include "stereokg/kg.h"

#include <algorithm>
#include <tuple>

#include "stereokg/errors.h"
#include "stereokg/io.h"
#include "stereokg/text.h"

namespace stereokg {

using io::Json;

std::string_view derivation_name(Derivation d) {
  return d == Derivation::kClusterDerived ? "cluster_derived" : "singleton_derived";
}

Derivation parse_derivation(std::string_view name) {
  if (name == "cluster_derived") return Derivation::kClusterDerived;
  if (name == "singleton_derived") return Derivation::kSingletonDerived;
  throw DataError("unknown derivation '" + std::string(name) + "'");
}

std::vector<KgEntry> build_kg(const std::vector<MinedAssertion> &assertions,
                              const std::vector<SentenceCluster> &clusters,
                              const std::vector<Representative> &representatives,
                              BuildReport *report) {
  std::map<int, const Representative *> rep_by_cluster;
  for (const auto &r : representatives) rep_by_cluster[r.cluster_id] = &r;

  std::vector<const SentenceCluster *> ordered;
  for (const auto &c : clusters) ordered.push_back(&c);
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto *a, const auto *b) {
    return std::tie(a->entity_id, a->cluster_id) < std::tie(b->entity_id, b->cluster_id);
  });

  BuildReport local;
  std::vector<KgEntry> out;
  for (const SentenceCluster *c : ordered) {
    ++local.clusters;
    auto it = rep_by_cluster.find(c->cluster_id);
    if (it == rep_by_cluster.end()) {
      ++local.unrepresentable;
      continue;
    }
    KgEntry e;
    e.entry_id = static_cast<int>(out.size());
    e.entity_id = c->entity_id;
    e.triple = it->second->triple;
    e.cluster_id = c->cluster_id;
    e.member_count = static_cast<int>(c->members.size());
    e.derivation = e.member_count >= 2 ? Derivation::kClusterDerived
                                       : Derivation::kSingletonDerived;
    for (std::size_t m : c->members) {
      if (m >= assertions.size()) {
        throw DataError("cluster " + std::to_string(c->cluster_id) +
                        " references assertion " + std::to_string(m) +
                        " beyond the mined set");
      }
      e.member_sentences.push_back(assertions[m].original_text);
      e.provenance.push_back(assertions[m].provenance);
    }
    out.push_back(std::move(e));
  }
  local.entries = out.size();
  if (report) *report = local;
  return out;
}

KgStats stats(const std::vector<KgEntry> &entries) {
  KgStats s;
  for (const auto &e : entries) ++s.per_entity_counts[e.entity_id];
  s.total = static_cast<int>(entries.size());
  return s;
}

void validate_entry(const KgEntry &e, const KgValidation *validation) {
  auto fail = [&](const std::string &why) {
    throw DataError("KG entry " + std::to_string(e.entry_id) + ": " + why);
  };
  if (text::trim(e.triple.subject).empty() || text::trim(e.triple.predicate).empty() ||
      text::trim(e.triple.object).empty()) {
    fail("triple has an empty field");
  }
  if (e.member_count < 1) fail("member_count must be >= 1");
  if (static_cast<int>(e.member_sentences.size()) != e.member_count) {
    fail("member_sentences length " + std::to_string(e.member_sentences.size()) +
         " != member_count " + std::to_string(e.member_count));
  }
  if ((e.derivation == Derivation::kClusterDerived) != (e.member_count >= 2)) {
    fail("derivation inconsistent with member_count");
  }
  if (e.triple.score && (*e.triple.score < 0.0 || *e.triple.score > 1.0)) {
    fail("score outside [0,1]");
  }
  if (!validation || !validation->entities) return;
  const EntitySpec *entity = nullptr;
  for (const auto &spec : *validation->entities) {
    if (spec.id == e.entity_id) entity = &spec;
  }
  if (!entity) fail("unknown entity '" + e.entity_id + "'");
  // A post-filter triple passes the filter unchanged.
  auto refiltered = filter_one(e.triple, *entity, validation->lexicons);
  if (!refiltered || refiltered->subject != e.triple.subject ||
      refiltered->predicate != e.triple.predicate ||
      refiltered->object != e.triple.object) {
    fail("triple violates the post-filter invariants");
  }
}

namespace {

Json entry_to_json(const KgEntry &e) {
  Json j;
  j["entry_id"] = e.entry_id;
  j["entity_id"] = e.entity_id;
  Json t;
  t["subject"] = e.triple.subject;
  t["predicate"] = e.triple.predicate;
  t["object"] = e.triple.object;
  t["source_assertion"] = e.triple.source_assertion;
  t["score"] = e.triple.score ? Json(*e.triple.score) : Json(nullptr);
  j["triple"] = std::move(t);
  j["cluster_id"] = e.cluster_id;
  j["member_count"] = e.member_count;
  j["member_sentences"] = e.member_sentences;
  j["derivation"] = derivation_name(e.derivation);
  Json prov = Json::array();
  for (const auto &p : e.provenance) {
    prov.push_back({{"platform", platform_name(p.platform)}, {"source_id", p.source_id}});
  }
  j["provenance"] = std::move(prov);
  return j;
}

KgEntry entry_from_json(const Json &j) {
  KgEntry e;
  e.entry_id = j.at("entry_id").get<int>();
  e.entity_id = j.at("entity_id").get<std::string>();
  const Json &t = j.at("triple");
  e.triple.subject = t.at("subject").get<std::string>();
  e.triple.predicate = t.at("predicate").get<std::string>();
  e.triple.object = t.at("object").get<std::string>();
  e.triple.source_assertion = t.value("source_assertion", std::size_t{0});
  if (t.contains("score") && !t.at("score").is_null()) {
    e.triple.score = t.at("score").get<double>();
  }
  e.cluster_id = j.value("cluster_id", 0);
  e.member_count = j.at("member_count").get<int>();
  e.member_sentences = j.at("member_sentences").get<std::vector<std::string>>();
  e.derivation = parse_derivation(j.at("derivation").get<std::string>());
  for (const auto &p : j.value("provenance", Json::array())) {
    e.provenance.push_back({parse_platform(p.at("platform").get<std::string>()),
                            p.at("source_id").get<std::string>()});
  }
  return e;
}

}  // namespace

std::string format_kg(const std::vector<KgEntry> &entries) {
  std::vector<Json> records;
  records.reserve(entries.size() + 1);
  records.push_back({{"format", kKgFormat}, {"version", kKgVersion}});
  for (const auto &e : entries) records.push_back(entry_to_json(e));
  return io::to_jsonl(records);
}

std::vector<KgEntry> parse_kg(std::string_view content, const KgValidation *validation) {
  const auto lines = io::split_lines(content);
  if (lines.empty()) throw DataError("KG file is empty (missing header)");
  Json header;
  try {
    header = Json::parse(lines.front());
  } catch (const Json::exception &) {
    throw DataError("KG header is not valid JSON");
  }
  if (!header.is_object() || header.value("format", std::string()) != kKgFormat) {
    throw DataError("KG header: expected format \"stereokg\"");
  }
  const int version = header.value("version", -1);
  if (version != kKgVersion) {
    throw DataError("KG version mismatch: expected " + std::to_string(kKgVersion) +
                    ", found " + std::to_string(version));
  }
  std::vector<KgEntry> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    KgEntry e;
    try {
      e = entry_from_json(Json::parse(lines[i]));
    } catch (const Json::exception &ex) {
      throw DataError("KG line " + std::to_string(i + 1) + ": " + ex.what());
    }
    validate_entry(e, validation);
    out.push_back(std::move(e));
  }
  return out;
}

void save_kg(const std::vector<KgEntry> &entries, const std::filesystem::path &path) {
  io::write_file(path, format_kg(entries));
}

std::vector<KgEntry> load_kg(const std::filesystem::path &path,
                             const KgValidation *validation) {
  return parse_kg(io::read_file(path), validation);
}

std::string format_kg_tsv(const std::vector<KgEntry> &entries) {
  std::string out = "entity\tsubject\tpredicate\tobject\tmember_count\n";
  for (const auto &e : entries) {
    out += e.entity_id + '\t' + e.triple.subject + '\t' + e.triple.predicate + '\t' +
           e.triple.object + '\t' + std::to_string(e.member_count) + '\n';
  }
  return out;
}

}  // namespace stereokg
