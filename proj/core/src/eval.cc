#include "stereokg/eval.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include "stereokg/csv.h"
#include "stereokg/errors.h"
#include "stereokg/hashing.h"
#include "stereokg/io.h"
#include "stereokg/text.h"
#include "stereokg/verbalize.h"

namespace stereokg {

using io::Json;

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::kCoh: return "coh";
    case Metric::kCom: return "com";
    case Metric::kDom: return "dom";
    case Metric::kCr1: return "cr1";
    case Metric::kCr2: return "cr2";
  }
  return "";
}

Metric parse_metric(std::string_view name) {
  const std::string lower = text::to_lower(name);
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == lower) return m;
  }
  throw ConfigError("unknown metric '" + std::string(name) + "'");
}

int metric_value(const AnnotationRecord &r, Metric metric) {
  switch (metric) {
    case Metric::kCoh: return r.coh;
    case Metric::kCom: return r.com;
    case Metric::kDom: return r.dom;
    case Metric::kCr1: return r.cr1;
    case Metric::kCr2: return r.cr2;
  }
  return 0;
}

int metric_max(Metric metric) {
  switch (metric) {
    case Metric::kCr1: return 1;
    case Metric::kCr2: return 4;
    default: return 2;
  }
}

void validate_record(const AnnotationRecord &r) {
  if (r.annotator_id.empty()) throw DataError("response has an empty annotator_id");
  for (Metric m : kAllMetrics) {
    const int v = metric_value(r, m);
    if (v < 0 || v > metric_max(m)) {
      throw DataError("annotator " + r.annotator_id + ", item " + std::to_string(r.item_id) +
                      ": " + std::string(metric_name(m)) + "=" + std::to_string(v) +
                      " outside 0.." + std::to_string(metric_max(m)));
    }
  }
}

std::vector<AnnotationItem> sample_eval_set(const std::vector<KgEntry> &kg,
                                            int n_per_stratum, int n_duplicates,
                                            std::uint64_t seed) {
  if (n_per_stratum < 0 || n_duplicates < 0) {
    throw ConfigError("sample sizes must be non-negative");
  }
  std::vector<const KgEntry *> sd, cd;
  for (const auto &e : kg) {
    (e.derivation == Derivation::kClusterDerived ? cd : sd).push_back(&e);
  }
  for (const auto &[stratum, name] : {std::pair{&sd, "singleton_derived"},
                                      std::pair{&cd, "cluster_derived"}}) {
    if (static_cast<int>(stratum->size()) < n_per_stratum) {
      throw DataError("stratum " + std::string(name) + " has " +
                      std::to_string(stratum->size()) + " entries, " +
                      std::to_string(n_per_stratum) + " required");
    }
  }
  if (n_duplicates > 2 * n_per_stratum) {
    throw ConfigError("cannot duplicate " + std::to_string(n_duplicates) + " of " +
                      std::to_string(2 * n_per_stratum) + " sampled items");
  }

  SeededRng rng(seed);
  std::vector<const KgEntry *> picked;
  for (auto *stratum : {&sd, &cd}) {
    rng.shuffle(*stratum);
    picked.insert(picked.end(), stratum->begin(), stratum->begin() + n_per_stratum);
  }
  std::vector<std::size_t> dup_pool(picked.size());
  for (std::size_t i = 0; i < dup_pool.size(); ++i) dup_pool[i] = i;
  rng.shuffle(dup_pool);
  std::vector<const KgEntry *> shown = picked;
  for (int d = 0; d < n_duplicates; ++d) shown.push_back(picked[dup_pool[d]]);
  rng.shuffle(shown);

  std::vector<AnnotationItem> items;
  std::map<int, int> first_item_for_entry;
  for (std::size_t i = 0; i < shown.size(); ++i) {
    const KgEntry &e = *shown[i];
    AnnotationItem item;
    item.item_id = static_cast<int>(i + 1);
    item.entry_id = e.entry_id;
    item.shown_text =
        verbalize_fallback(e.triple.subject, e.triple.predicate, e.triple.object);
    item.derivation = e.derivation;
    auto [it, inserted] = first_item_for_entry.emplace(e.entry_id, item.item_id);
    if (!inserted) item.duplicate_of = it->second;
    items.push_back(std::move(item));
  }
  return items;
}

namespace {

std::map<int, const AnnotationItem *> index_items(const std::vector<AnnotationItem> &items) {
  std::map<int, const AnnotationItem *> out;
  for (const auto &item : items) {
    if (!out.emplace(item.item_id, &item).second) {
      throw DataError("duplicate item_id " + std::to_string(item.item_id) + " in sheet");
    }
  }
  return out;
}

// (annotator, item) -> record; rejects repeated responses.
std::map<std::pair<std::string, int>, const AnnotationRecord *> index_records(
    const std::vector<AnnotationRecord> &records) {
  std::map<std::pair<std::string, int>, const AnnotationRecord *> out;
  for (const auto &r : records) {
    validate_record(r);
    if (!out.emplace(std::pair{r.annotator_id, r.item_id}, &r).second) {
      throw DataError("annotator " + r.annotator_id + " answered item " +
                      std::to_string(r.item_id) + " more than once");
    }
  }
  return out;
}

double percent(int num, int den) { return den == 0 ? 0.0 : 100.0 * num / den; }

}  // namespace

SucResult success_rate(const std::vector<AnnotationItem> &items,
                       const std::vector<AnnotationRecord> &records,
                       SucAggregation aggregation) {
  const auto item_index = index_items(items);
  index_records(records);
  std::map<int, std::vector<const AnnotationRecord *>> by_item;
  for (const auto &r : records) {
    if (!item_index.count(r.item_id)) {
      throw DataError("response for unknown item " + std::to_string(r.item_id));
    }
    by_item[r.item_id].push_back(&r);
  }
  SucResult s;
  for (const auto &item : items) {
    if (item.duplicate_of) continue;
    auto it = by_item.find(item.item_id);
    if (it == by_item.end()) {
      throw DataError("item " + std::to_string(item.item_id) + " has no responses");
    }
    const auto &rs = it->second;
    bool success = true;
    for (Metric m : {Metric::kCoh, Metric::kCom, Metric::kDom}) {
      if (aggregation == SucAggregation::kMean) {
        double sum = 0.0;
        for (const auto *r : rs) sum += metric_value(*r, m);
        success = success && (sum / rs.size() > 1.0);
      } else {
        std::size_t above = 0;
        for (const auto *r : rs) above += metric_value(*r, m) > 1 ? 1 : 0;
        success = success && (2 * above > rs.size());
      }
    }
    const bool cd = item.derivation == Derivation::kClusterDerived;
    ++s.items_all;
    (cd ? s.items_cd : s.items_sd)++;
    if (success) {
      ++s.successes_all;
      (cd ? s.successes_cd : s.successes_sd)++;
    }
  }
  s.suc_all = percent(s.successes_all, s.items_all);
  s.suc_sd = percent(s.successes_sd, s.items_sd);
  s.suc_cd = percent(s.successes_cd, s.items_cd);
  return s;
}

double observed_agreement(const std::vector<AnnotationRecord> &records, Metric metric) {
  std::map<std::string, std::map<int, int>> values;
  for (const auto &[key, r] : index_records(records)) {
    values[key.first][key.second] = metric_value(*r, metric);
  }
  double total = 0.0;
  int pairs = 0;
  for (auto a = values.begin(); a != values.end(); ++a) {
    for (auto b = std::next(a); b != values.end(); ++b) {
      int shared = 0, same = 0;
      for (const auto &[item, va] : a->second) {
        auto it = b->second.find(item);
        if (it == b->second.end()) continue;
        ++shared;
        if (it->second == va) ++same;
      }
      if (shared == 0) continue;
      total += static_cast<double>(same) / shared;
      ++pairs;
    }
  }
  if (pairs == 0) throw DataError("observed agreement: no co-annotated items");
  return total / pairs;
}

std::map<std::string, double> intra_consistency(
    const std::vector<AnnotationRecord> &records,
    const std::vector<AnnotationItem> &items) {
  const auto item_index = index_items(items);
  std::vector<std::pair<int, int>> dup_pairs;  // (original, duplicate)
  for (const auto &item : items) {
    if (!item.duplicate_of) continue;
    if (!item_index.count(*item.duplicate_of)) {
      throw DataError("item " + std::to_string(item.item_id) +
                      " duplicates unknown item " + std::to_string(*item.duplicate_of));
    }
    dup_pairs.emplace_back(*item.duplicate_of, item.item_id);
  }
  if (dup_pairs.empty()) throw DataError("intra-consistency: sheet has no duplicate items");

  const auto by_key = index_records(records);
  std::set<std::string> annotators;
  for (const auto &r : records) annotators.insert(r.annotator_id);
  std::map<std::string, double> out;
  for (const auto &a : annotators) {
    double sum = 0.0;
    int n = 0;
    for (const auto &[orig, dup] : dup_pairs) {
      auto o = by_key.find({a, orig});
      auto d = by_key.find({a, dup});
      if (o == by_key.end() || d == by_key.end()) continue;
      int match = 0;
      for (Metric m : kAllMetrics) {
        if (metric_value(*o->second, m) == metric_value(*d->second, m)) ++match;
      }
      sum += match / 5.0;
      ++n;
    }
    if (n > 0) out[a] = sum / n;
  }
  return out;
}

void validate_probe(const MaskedProbe &p) {
  std::size_t count = 0;
  for (std::size_t pos = p.masked.find(kMaskToken); pos != std::string::npos;
       pos = p.masked.find(kMaskToken, pos + kMaskToken.size())) {
    ++count;
  }
  if (count != 1) {
    throw DataError("probe " + std::to_string(p.probe_id) + ": expected exactly one " +
                    std::string(kMaskToken) + ", found " + std::to_string(count));
  }
  if (p.gold.empty() || text::split_ws(p.gold).size() != 1 ||
      p.gold.find_first_of(" \t\r\n") != std::string::npos) {
    throw DataError("probe " + std::to_string(p.probe_id) +
                    ": gold must be a single whitespace-free token");
  }
}

AccResult acc_at_k(const std::vector<MaskedProbe> &probes,
                   const std::map<int, std::vector<std::string>> &predictions, int k) {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (probes.empty()) throw DataError("acc_at_k: no probes");
  AccResult r;
  for (const auto &p : probes) {
    auto it = predictions.find(p.probe_id);
    if (it == predictions.end() || it->second.empty()) {
      throw DataError("probe " + std::to_string(p.probe_id) + " has no predictions");
    }
    const std::string gold = text::to_lower(p.gold);
    const std::size_t n = std::min(it->second.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
      if (text::to_lower(text::trim(it->second[i])) == gold) {
        ++r.hits;
        break;
      }
    }
    ++r.probes;
  }
  r.accuracy = 100.0 * r.hits / r.probes;
  return r;
}

namespace {

int parse_int(const std::string &field, std::string_view what, std::size_t line) {
  try {
    std::size_t used = 0;
    int v = std::stoi(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception &) {
    throw DataError("line " + std::to_string(line) + ": " + std::string(what) +
                    " is not an integer: '" + field + "'");
  }
}

std::vector<csv::Row> parse_with_header(std::string_view content,
                                        const std::vector<std::string> &header,
                                        std::string_view what) {
  auto rows = csv::parse(content);
  if (rows.empty() || rows.front() != header) {
    throw DataError(std::string(what) + ": expected header " + text::join(header, ","));
  }
  rows.erase(rows.begin());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != header.size()) {
      throw DataError(std::string(what) + " row " + std::to_string(i + 2) + ": expected " +
                      std::to_string(header.size()) + " fields");
    }
  }
  return rows;
}

const std::vector<std::string> kSheetHeader = {"item_id", "entry_id", "shown_text",
                                               "duplicate_of"};
const std::vector<std::string> kResponseHeader = {"annotator_id", "item_id", "coh", "com",
                                                  "dom", "cr1", "cr2"};

}  // namespace

std::string format_sheet(const std::vector<AnnotationItem> &items) {
  std::vector<csv::Row> rows = {kSheetHeader};
  for (const auto &i : items) {
    rows.push_back({std::to_string(i.item_id), std::to_string(i.entry_id), i.shown_text,
                    i.duplicate_of ? std::to_string(*i.duplicate_of) : ""});
  }
  return csv::format(rows);
}

std::vector<AnnotationItem> parse_sheet(std::string_view content,
                                        const std::vector<KgEntry> *kg) {
  std::map<int, Derivation> derivations;
  if (kg) {
    for (const auto &e : *kg) derivations[e.entry_id] = e.derivation;
  }
  std::vector<AnnotationItem> items;
  const auto rows = parse_with_header(content, kSheetHeader, "annotation sheet");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto &row = rows[i];
    AnnotationItem item;
    item.item_id = parse_int(row[0], "item_id", i + 2);
    item.entry_id = parse_int(row[1], "entry_id", i + 2);
    item.shown_text = row[2];
    if (!row[3].empty()) item.duplicate_of = parse_int(row[3], "duplicate_of", i + 2);
    if (kg) {
      auto it = derivations.find(item.entry_id);
      if (it == derivations.end()) {
        throw DataError("sheet item " + std::to_string(item.item_id) +
                        " references unknown KG entry " + std::to_string(item.entry_id));
      }
      item.derivation = it->second;
    }
    items.push_back(std::move(item));
  }
  // Duplicates must point at an earlier item.
  std::set<int> seen;
  for (const auto &item : items) {
    if (item.duplicate_of && !seen.count(*item.duplicate_of)) {
      throw DataError("sheet item " + std::to_string(item.item_id) +
                      " duplicates item " + std::to_string(*item.duplicate_of) +
                      " which does not precede it");
    }
    seen.insert(item.item_id);
  }
  return items;
}

std::string format_responses(const std::vector<AnnotationRecord> &records) {
  std::vector<csv::Row> rows = {kResponseHeader};
  for (const auto &r : records) {
    rows.push_back({r.annotator_id, std::to_string(r.item_id), std::to_string(r.coh),
                    std::to_string(r.com), std::to_string(r.dom), std::to_string(r.cr1),
                    std::to_string(r.cr2)});
  }
  return csv::format(rows);
}

std::vector<AnnotationRecord> parse_responses(std::string_view content) {
  std::vector<AnnotationRecord> out;
  const auto rows = parse_with_header(content, kResponseHeader, "responses");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto &row = rows[i];
    AnnotationRecord r;
    r.annotator_id = text::trim(row[0]);
    r.item_id = parse_int(row[1], "item_id", i + 2);
    r.coh = parse_int(row[2], "coh", i + 2);
    r.com = parse_int(row[3], "com", i + 2);
    r.dom = parse_int(row[4], "dom", i + 2);
    r.cr1 = parse_int(row[5], "cr1", i + 2);
    r.cr2 = parse_int(row[6], "cr2", i + 2);
    validate_record(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_probes(const std::vector<MaskedProbe> &probes) {
  std::vector<Json> records;
  for (const auto &p : probes) {
    records.push_back(
        {{"id", p.probe_id}, {"masked", p.masked}, {"gold", p.gold}, {"entity", p.entity_id}});
  }
  return io::to_jsonl(records);
}

std::vector<MaskedProbe> parse_probes(std::string_view content) {
  std::vector<MaskedProbe> out;
  std::set<int> ids;
  const auto lines = io::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    MaskedProbe p;
    try {
      Json j = Json::parse(lines[i]);
      p.probe_id = j.at("id").get<int>();
      p.masked = j.at("masked").get<std::string>();
      p.gold = j.at("gold").get<std::string>();
      p.entity_id = j.value("entity", std::string());
    } catch (const Json::exception &e) {
      throw DataError("probes line " + std::to_string(i + 1) + ": " + e.what());
    }
    validate_probe(p);
    if (!ids.insert(p.probe_id).second) {
      throw DataError("duplicate probe id " + std::to_string(p.probe_id));
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string format_predictions(const std::map<int, std::vector<std::string>> &predictions) {
  std::vector<Json> records;
  for (const auto &[id, topk] : predictions) records.push_back({{"id", id}, {"topk", topk}});
  return io::to_jsonl(records);
}

std::map<int, std::vector<std::string>> parse_predictions(std::string_view content) {
  std::map<int, std::vector<std::string>> out;
  const auto lines = io::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    try {
      Json j = Json::parse(lines[i]);
      out[j.at("id").get<int>()] = j.at("topk").get<std::vector<std::string>>();
    } catch (const Json::exception &e) {
      throw DataError("predictions line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

std::vector<AnnotationRecord> annotate(const std::vector<AnnotationItem> &items,
                                       std::string_view annotator_id, std::istream &in,
                                       std::ostream &out) {
  static const std::map<Metric, std::string> kPrompts = {
      {Metric::kCoh, "Coherence (0-2)"},
      {Metric::kCom, "Completeness (0-2)"},
      {Metric::kDom, "Domain membership (0-2)"},
      {Metric::kCr1, "Heard this before? (0=no, 1=yes)"},
      {Metric::kCr2, "Believe it is true? (0-4)"},
  };
  std::vector<AnnotationRecord> records;
  for (const auto &item : items) {
    out << "\n[" << item.item_id << "/" << items.size() << "] " << item.shown_text << "\n";
    AnnotationRecord r;
    r.annotator_id = std::string(annotator_id);
    r.item_id = item.item_id;
    for (Metric m : kAllMetrics) {
      while (true) {
        out << "  " << kPrompts.at(m) << ": " << std::flush;
        std::string line;
        if (!std::getline(in, line)) {
          throw DataError("annotation input ended at item " + std::to_string(item.item_id));
        }
        line = text::trim(line);
        if (line.size() == 1 && line[0] >= '0' && line[0] - '0' <= metric_max(m)) {
          const int v = line[0] - '0';
          switch (m) {
            case Metric::kCoh: r.coh = v; break;
            case Metric::kCom: r.com = v; break;
            case Metric::kDom: r.dom = v; break;
            case Metric::kCr1: r.cr1 = v; break;
            case Metric::kCr2: r.cr2 = v; break;
          }
          break;
        }
        out << "  please enter a value between 0 and " << metric_max(m) << "\n";
      }
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace stereokg
