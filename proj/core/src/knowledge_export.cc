#include "stereokg/knowledge_export.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>

#include "stereokg/csv.h"
#include "stereokg/errors.h"
#include "stereokg/hashing.h"
#include "stereokg/io.h"
#include "stereokg/text.h"
#include "stereokg/verbalize.h"

namespace stereokg {

using io::Json;

namespace {

// Corpus lines cannot contain line breaks.
std::string one_line(std::string_view s) {
  std::string out = text::join(text::split_ws(s), " ");
  return out;
}

}  // namespace

KnowledgeCorpus export_uk(const std::vector<KgEntry> &kg, bool dedup) {
  KnowledgeCorpus c;
  c.kind = CorpusKind::kUnstructured;
  std::set<std::string> seen;
  for (const auto &e : kg) {
    for (const auto &s : e.member_sentences) {
      std::string line = one_line(s);
      if (line.empty()) continue;
      if (dedup && !seen.insert(line).second) continue;
      c.sentences.push_back(std::move(line));
      c.source_entry_ids.push_back(e.entry_id);
    }
  }
  return c;
}

SkExport export_sk(const std::vector<KgEntry> &kg, const ScorerGateway *gateway,
                   bool fallback) {
  if (kg.empty()) throw EmptyCorpus("cannot export structured knowledge from an empty KG");
  if (!gateway && !fallback) {
    throw ConfigError("structured export needs a scorer or the fallback verbalizer");
  }
  std::vector<TripleText> triples;
  for (const auto &e : kg) {
    triples.push_back({e.triple.subject, e.triple.predicate, e.triple.object});
  }

  // nullopt marks an entry the scorer could not verbalize.
  std::vector<std::optional<std::string>> produced(kg.size());
  if (gateway) {
    try {
      auto sentences = gateway->verbalize(triples);
      for (std::size_t i = 0; i < sentences.size(); ++i) produced[i] = sentences[i];
    } catch (const ScorerError &) {
      // Retry one at a time so a single bad entry does not sink the batch.
      for (std::size_t i = 0; i < triples.size(); ++i) {
        try {
          produced[i] = gateway->verbalize({triples[i]}).front();
        } catch (const ScorerError &) {
        }
      }
    }
  }

  SkExport out;
  out.corpus.kind = CorpusKind::kStructured;
  for (std::size_t i = 0; i < kg.size(); ++i) {
    std::string sentence;
    if (produced[i] && !text::trim(*produced[i]).empty()) {
      sentence = finish_sentence(one_line(*produced[i]));
      ++out.verbalized;
    } else if (fallback) {
      sentence = verbalize_fallback(triples[i].s, triples[i].p, triples[i].o);
      ++out.fallback;
    } else {
      ++out.skipped;
      continue;
    }
    out.corpus.sentences.push_back(std::move(sentence));
    out.corpus.source_entry_ids.push_back(kg[i].entry_id);
  }
  return out;
}

std::string format_corpus(const KnowledgeCorpus &corpus) {
  std::string out;
  for (const auto &s : corpus.sentences) out += s + '\n';
  return out;
}

std::string format_corpus_sidecar(const KnowledgeCorpus &corpus) {
  std::vector<Json> records;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    records.push_back({{"line", i + 1}, {"entry_id", corpus.source_entry_ids[i]}});
  }
  return io::to_jsonl(records);
}

std::vector<LabeledSample> parse_labels(std::string_view content) {
  auto rows = csv::parse(content);
  if (rows.empty()) throw DataError("label file is empty");
  const auto &header = rows.front();
  const bool has_split = header.size() == 3 && header[2] == "split";
  if (header.size() < 2 || header[0] != "id" || header[1] != "label" ||
      (header.size() == 3 && !has_split) || header.size() > 3) {
    throw DataError("label file: expected header id,label[,split]");
  }
  std::vector<LabeledSample> out;
  std::set<std::string> ids;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto &row = rows[i];
    if (row.size() != header.size()) {
      throw DataError("label file row " + std::to_string(i + 1) + ": expected " +
                      std::to_string(header.size()) + " fields");
    }
    LabeledSample s{text::trim(row[0]), text::trim(row[1]), has_split ? text::trim(row[2]) : ""};
    if (s.id.empty()) throw DataError("label file row " + std::to_string(i + 1) + ": empty id");
    if (has_split && s.split != "train" && s.split != "test") {
      throw DataError("label file row " + std::to_string(i + 1) +
                      ": split must be train or test");
    }
    if (!ids.insert(s.id).second) throw DataError("label file: duplicate id " + s.id);
    out.push_back(std::move(s));
  }
  return out;
}

SplitManifest build_split_manifest(std::string_view dataset,
                                   const std::vector<LabeledSample> &samples,
                                   const std::vector<std::string> &stereotype_ids,
                                   std::uint64_t seed) {
  std::set<std::string> known;
  for (const auto &s : samples) known.insert(s.id);
  std::vector<std::string> unknown;
  for (const auto &id : stereotype_ids) {
    if (!known.count(id)) unknown.push_back(id);
  }
  if (!unknown.empty()) {
    throw DataError("stereotype ids not in dataset: " + text::join(unknown, ", "));
  }
  const std::set<std::string> stereo(stereotype_ids.begin(), stereotype_ids.end());

  SplitManifest m;
  m.dataset = std::string(dataset);
  m.seed = seed;
  SeededRng rng(seed);
  const bool fixed = std::any_of(samples.begin(), samples.end(),
                                 [](const auto &s) { return !s.split.empty(); });
  if (fixed) {
    m.mode = "holdout_dev";
    std::vector<LabeledSample> train;
    for (const auto &s : samples) (s.split == "test" ? m.test : train).push_back(s);
    rng.shuffle(train);
    const auto n_dev = static_cast<std::size_t>(std::llround(0.2 * train.size()));
    m.dev.assign(train.begin(), train.begin() + n_dev);
    m.train.assign(train.begin() + n_dev, train.end());
  } else {
    m.mode = "ratio";
    std::vector<LabeledSample> all = samples;
    rng.shuffle(all);
    const auto n_train = static_cast<std::size_t>(std::llround(0.7 * all.size()));
    const auto n_dev = std::min(all.size() - n_train,
                                static_cast<std::size_t>(std::llround(0.1 * all.size())));
    m.train.assign(all.begin(), all.begin() + n_train);
    m.dev.assign(all.begin() + n_train, all.begin() + n_train + n_dev);
    m.test.assign(all.begin() + n_train + n_dev, all.end());
  }
  for (auto *part : {&m.train, &m.dev, &m.test}) {
    std::sort(part->begin(), part->end(),
              [](const auto &a, const auto &b) { return a.id < b.id; });
  }
  std::vector<LabeledSample> kept_dev;
  for (const auto &s : m.dev) {
    if (stereo.count(s.id)) m.dev_exclusions.push_back(s.id);
    else kept_dev.push_back(s);
  }
  m.dev = std::move(kept_dev);
  for (const auto &s : m.test) {
    if (stereo.count(s.id)) m.stereotype_test.push_back(s.id);
  }
  m.stereotype_test.insert(m.stereotype_test.end(), m.dev_exclusions.begin(),
                           m.dev_exclusions.end());
  std::sort(m.stereotype_test.begin(), m.stereotype_test.end());
  for (const auto &s : m.train) {
    if (stereo.count(s.id)) m.stereotype_in_train.push_back(s.id);
  }
  return m;
}

std::string format_split_manifest(const SplitManifest &m) {
  auto samples = [](const std::vector<LabeledSample> &v) {
    Json a = Json::array();
    for (const auto &s : v) a.push_back({{"id", s.id}, {"label", s.label}});
    return a;
  };
  Json j;
  j["dataset"] = m.dataset;
  j["seed"] = m.seed;
  j["mode"] = m.mode;
  j["counts"] = {{"train", m.train.size()},
                 {"dev", m.dev.size()},
                 {"test", m.test.size()},
                 {"stereotype_test", m.stereotype_test.size()},
                 {"dev_exclusions", m.dev_exclusions.size()}};
  j["train"] = samples(m.train);
  j["dev"] = samples(m.dev);
  j["test"] = samples(m.test);
  j["stereotype_test"] = m.stereotype_test;
  j["dev_exclusions"] = m.dev_exclusions;
  j["stereotype_in_train"] = m.stereotype_in_train;
  return j.dump(2) + '\n';
}

}  // namespace stereokg
