#include "stereokg/triples.h"

#include <algorithm>
#include <chrono>
#include <tuple>

#include <httplib.h>

#include "stereokg/io.h"
#include "stereokg/lexicon.h"
#include "stereokg/text.h"
#include "stereokg/verbalize.h"

namespace stereokg {

using io::Json;

std::size_t Triple::token_count() const {
  return text::split_ws(subject).size() + text::split_ws(predicate).size() +
         text::split_ws(object).size();
}

std::string Triple::concatenated() const {
  return concat_triple(subject, predicate, object);
}

FilterLexicons FilterLexicons::from_params(const ExtractionParams &params) {
  FilterLexicons lex;
  for (const auto &w : params.personal_pronouns) lex.personal_pronouns.insert(text::to_lower(w));
  for (const auto &w : params.colloquialisms) lex.colloquialisms.insert(text::to_lower(w));
  for (const auto &w : params.modalities) lex.modalities.insert(text::to_lower(w));
  return lex;
}

HttpExtractor::HttpExtractor(std::string url, int timeout_ms)
    : url_(std::move(url)), timeout_ms_(timeout_ms) {}

std::vector<TripleText> HttpExtractor::extract(std::string_view sentence) {
  httplib::Client client(url_);
  const auto timeout = std::chrono::milliseconds(timeout_ms_);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  Json body = {{"sentence", std::string(sentence)}};
  auto res = client.Post("/extract", body.dump(), "application/json");
  if (!res) throw TransportError("extractor " + url_ + ": no response");
  if (res->status != 200) {
    throw TransportError("extractor " + url_ + ": HTTP " + std::to_string(res->status));
  }
  std::vector<TripleText> out;
  try {
    Json j = Json::parse(res->body);
    for (const auto &t : j.at("triples")) {
      out.push_back({t.at("s").get<std::string>(), t.at("p").get<std::string>(),
                     t.at("o").get<std::string>()});
    }
  } catch (const Json::exception &e) {
    throw ScorerError(std::string("extractor: malformed response: ") + e.what());
  }
  return out;
}

namespace {

struct EntitySpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::optional<EntitySpan> first_entity_span(const std::vector<std::string> &norm,
                                            const EntitySpec &entity) {
  std::optional<EntitySpan> best;
  for (const auto &form : entity.surface_forms) {
    auto form_tokens = text::split_ws(form);
    std::size_t pos = text::find_tokens(norm, form_tokens);
    if (pos == std::string::npos) continue;
    EntitySpan span{pos, pos + form_tokens.size()};
    if (!best || span.begin < best->begin ||
        (span.begin == best->begin && span.end > best->end)) {
      best = span;
    }
  }
  return best;
}

bool subject_has_entity(const std::string &subject, const EntitySpec &entity) {
  auto tokens = text::normalized_tokens(subject);
  for (const auto &form : entity.surface_forms) {
    if (text::find_tokens(tokens, text::split_ws(form)) != std::string::npos) {
      return true;
    }
  }
  return false;
}

std::string join_range(const std::vector<std::string> &tokens, std::size_t b,
                       std::size_t e) {
  std::vector<std::string> part(tokens.begin() + b, tokens.begin() + e);
  return text::strip_punct(text::join(part, " "));
}

}  // namespace

std::vector<Triple> extract(std::string_view statement, const EntitySpec &entity,
                            std::size_t source_assertion,
                            ExternalExtractor *external) {
  std::vector<Triple> out;
  const std::vector<std::string> raw = text::split_ws(statement);
  std::vector<std::string> norm;
  norm.reserve(raw.size());
  for (const auto &t : raw) norm.push_back(text::strip_punct(text::to_lower(t)));

  if (auto span = first_entity_span(norm, entity)) {
    std::size_t start = span->end;
    auto verb_after = [&](std::size_t pos) {
      for (std::size_t j = pos + 1; j < norm.size(); ++j) {
        if (lexicon::is_verb(norm[j])) return true;
      }
      return false;
    };
    // "indian culture values family": a head that doubles as a verb stays in
    // the subject only if another verb follows.
    for (int k = 0; k < 2 && start < norm.size() && lexicon::is_nominal_head(norm[start]); ++k) {
      if (lexicon::is_verb(norm[start]) && !verb_after(start)) break;
      ++start;
    }
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    std::size_t i = start;
    while (i < norm.size()) {
      bool opens = lexicon::is_verb(norm[i]) ||
                   (lexicon::is_negation(norm[i]) && i + 1 < norm.size() &&
                    lexicon::is_verb(norm[i + 1]));
      if (!opens) {
        ++i;
        continue;
      }
      std::size_t j = i + 1;
      while (j < norm.size() &&
             (lexicon::is_verb(norm[j]) || lexicon::is_negation(norm[j]))) {
        ++j;
      }
      groups.emplace_back(i, j);
      i = j;
    }
    if (!groups.empty()) {
      const std::size_t subject_end = groups.front().first;
      std::string subject = join_range(raw, 0, subject_end);
      for (const auto &[gb, ge] : groups) {
        std::string object = join_range(raw, ge, raw.size());
        if (object.empty()) continue;
        Triple t;
        t.subject = subject;
        t.predicate = join_range(raw, subject_end, ge);
        t.object = std::move(object);
        t.source_assertion = source_assertion;
        if (!t.subject.empty() && !t.predicate.empty()) out.push_back(std::move(t));
      }
    }
  }

  if (external) {
    for (auto &c : external->extract(statement)) {
      Triple t;
      t.subject = text::trim(c.s);
      t.predicate = text::trim(c.p);
      t.object = text::trim(c.o);
      t.source_assertion = source_assertion;
      if (!t.subject.empty() && !t.predicate.empty() && !t.object.empty()) {
        out.push_back(std::move(t));
      }
    }
  }
  return out;
}

std::optional<Triple> filter_one(const Triple &triple, const EntitySpec &entity,
                                 const FilterLexicons &lexicons,
                                 FilterReport *report) {
  FilterReport scratch;
  FilterReport &r = report ? *report : scratch;
  ++r.input;
  for (const auto *field : {&triple.subject, &triple.predicate, &triple.object}) {
    for (const auto &tok : text::normalized_tokens(*field)) {
      if (lexicons.personal_pronouns.count(tok)) {
        ++r.dropped_pronoun;
        return std::nullopt;
      }
    }
  }
  if (!subject_has_entity(triple.subject, entity)) {
    ++r.dropped_no_entity;
    return std::nullopt;
  }
  Triple out = triple;
  for (auto *field : {&out.subject, &out.predicate, &out.object}) {
    std::vector<std::string> kept;
    for (const auto &tok : text::split_ws(*field)) {
      std::string n = text::strip_punct(text::to_lower(tok));
      if (lexicons.colloquialisms.count(n) || lexicons.modalities.count(n)) continue;
      kept.push_back(tok);
    }
    *field = text::trim(text::join(kept, " "));
    if (field->empty()) {
      ++r.dropped_emptied;
      return std::nullopt;
    }
  }
  ++r.kept;
  return out;
}

std::vector<Triple> filter(const std::vector<Triple> &triples,
                           const EntitySpec &entity, const FilterLexicons &lexicons,
                           FilterReport *report) {
  std::vector<Triple> out;
  for (const auto &t : triples) {
    if (auto kept = filter_one(t, entity, lexicons, report)) out.push_back(std::move(*kept));
  }
  return out;
}

std::size_t pick_representative(std::span<const Triple> candidates,
                                 std::span<const double> scores) {
  if (candidates.empty()) throw ClusterUnrepresentable("no candidate triples");
  if (scores.size() != candidates.size()) {
    throw DataError("pick_representative: scores and candidates differ in length");
  }
  auto key = [&](std::size_t i) {
    return std::make_tuple(candidates[i].token_count(),
                           std::cref(candidates[i].subject),
                           std::cref(candidates[i].predicate),
                           std::cref(candidates[i].object));
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (scores[i] > scores[best]) {
      best = i;
    } else if (scores[i] == scores[best] && key(i) < key(best)) {
      best = i;
    }
  }
  return best;
}

Triple select_representative(const std::vector<Triple> &candidates,
                             const ScorerGateway &gateway) {
  if (candidates.empty()) throw ClusterUnrepresentable("no candidate triples");
  std::vector<std::string> sentences;
  sentences.reserve(candidates.size());
  for (const auto &c : candidates) sentences.push_back(c.concatenated());
  const auto scores = gateway.acceptability(sentences);
  std::size_t best = pick_representative(candidates, scores);
  Triple t = candidates[best];
  t.score = scores[best];
  return t;
}

std::vector<Representative> extract_representatives(
    const std::vector<MinedAssertion> &assertions,
    const std::vector<SentenceCluster> &clusters, const PipelineConfig &config,
    const ScorerGateway &gateway, ExternalExtractor *external,
    ExtractionReport *report) {
  ExtractionReport local;
  const FilterLexicons lexicons = FilterLexicons::from_params(config.extraction);

  // Candidates for every cluster, scored in a single gateway call.
  std::vector<std::vector<Triple>> per_cluster(clusters.size());
  std::vector<std::string> sentences;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    ++local.clusters;
    const auto &cl = clusters[c];
    const EntitySpec &entity = config.entity(cl.entity_id);
    for (std::size_t m : cl.members) {
      if (m >= assertions.size()) {
        throw DataError("cluster " + std::to_string(cl.cluster_id) +
                        " references assertion " + std::to_string(m) +
                        " beyond the mined set");
      }
      ++local.statements;
      auto raw = extract(assertions[m].statement_text, entity, m, external);
      if (raw.empty()) ++local.statements_without_triple;
      local.candidates += raw.size();
      for (auto &t : filter(raw, entity, lexicons, &local.filter)) {
        sentences.push_back(t.concatenated());
        per_cluster[c].push_back(std::move(t));
      }
    }
  }
  const std::vector<double> scores =
      sentences.empty() ? std::vector<double>{} : gateway.acceptability(sentences);

  std::vector<Representative> out;
  std::size_t offset = 0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto &cands = per_cluster[c];
    if (cands.empty()) {
      ++local.unrepresentable;
      continue;
    }
    std::span<const double> cluster_scores(scores.data() + offset, cands.size());
    std::size_t best = pick_representative(cands, cluster_scores);
    Representative r;
    r.cluster_id = clusters[c].cluster_id;
    r.entity_id = clusters[c].entity_id;
    r.member_count = static_cast<int>(clusters[c].members.size());
    r.triple = cands[best];
    r.triple.score = cluster_scores[best];
    out.push_back(std::move(r));
    offset += cands.size();
  }
  local.representatives = out.size();
  if (report) *report = local;
  return out;
}

std::string format_triples_tsv(const std::vector<Representative> &reps) {
  std::string out = "entity\tsubject\tpredicate\tobject\tcluster_id\tmember_count\n";
  for (const auto &r : reps) {
    out += r.entity_id + '\t' + r.triple.subject + '\t' + r.triple.predicate + '\t' +
           r.triple.object + '\t' + std::to_string(r.cluster_id) + '\t' +
           std::to_string(r.member_count) + '\n';
  }
  return out;
}

std::string format_representatives(const std::vector<Representative> &reps) {
  std::vector<Json> records;
  for (const auto &r : reps) {
    Json j;
    j["cluster_id"] = r.cluster_id;
    j["entity"] = r.entity_id;
    j["member_count"] = r.member_count;
    j["subject"] = r.triple.subject;
    j["predicate"] = r.triple.predicate;
    j["object"] = r.triple.object;
    j["source_assertion"] = r.triple.source_assertion;
    j["score"] = r.triple.score ? Json(*r.triple.score) : Json(nullptr);
    records.push_back(std::move(j));
  }
  return io::to_jsonl(records);
}

std::vector<Representative> parse_representatives(std::string_view content) {
  std::vector<Representative> out;
  const auto lines = io::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    try {
      Json j = Json::parse(lines[i]);
      Representative r;
      r.cluster_id = j.at("cluster_id").get<int>();
      r.entity_id = j.at("entity").get<std::string>();
      r.member_count = j.at("member_count").get<int>();
      r.triple.subject = j.at("subject").get<std::string>();
      r.triple.predicate = j.at("predicate").get<std::string>();
      r.triple.object = j.at("object").get<std::string>();
      r.triple.source_assertion = j.at("source_assertion").get<std::size_t>();
      if (!j.at("score").is_null()) r.triple.score = j.at("score").get<double>();
      out.push_back(std::move(r));
    } catch (const Json::exception &e) {
      throw DataError("representatives line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Representative> load_representatives(const std::filesystem::path &path) {
  return parse_representatives(io::read_file(path));
}

}  // namespace stereokg
