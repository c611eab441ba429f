#include "stereokg/analytics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "stereokg/errors.h"
#include "stereokg/text.h"
#include "stereokg/verbalize.h"

namespace stereokg {

MaskResult mask_entity(std::string_view sentence, const EntitySpec &entity) {
  std::vector<std::string> forms = entity.surface_forms;
  std::stable_sort(forms.begin(), forms.end(),
                   [](const auto &a, const auto &b) { return a.size() > b.size(); });
  MaskResult r;
  r.text = std::string(sentence);
  for (const auto &form : forms) {
    std::size_t pos = 0;
    while ((pos = text::find_word(r.text, form, pos)) != std::string::npos) {
      r.text.replace(pos, form.size(), entity.mask_term);
      pos += entity.mask_term.size();
      ++r.replacements;
    }
  }
  return r;
}

SentimentSummary summarize_labels(std::string_view entity_id,
                                  const std::vector<SentimentLabel> &labels) {
  SentimentSummary s;
  s.entity_id = std::string(entity_id);
  s.n = static_cast<int>(labels.size());
  if (labels.empty()) return s;
  int pos = 0, neu = 0, neg = 0;
  for (auto l : labels) {
    if (l == SentimentLabel::kPos) ++pos;
    else if (l == SentimentLabel::kNeu) ++neu;
    else ++neg;
  }
  s.pos_pct = 100.0 * pos / s.n;
  s.neu_pct = 100.0 * neu / s.n;
  s.neg_pct = 100.0 * neg / s.n;
  return s;
}

std::vector<SentimentSummary> sentiment_distribution(
    const std::vector<KgEntry> &entries, const PipelineConfig &config,
    const ScorerGateway &gateway) {
  std::map<std::string, std::vector<std::string>> masked;
  std::map<std::string, int> unmasked;
  for (const auto &e : entries) {
    const EntitySpec &entity = config.entity(e.entity_id);
    auto m = mask_entity(e.triple.concatenated(), entity);
    if (m.replacements == 0) ++unmasked[e.entity_id];
    masked[e.entity_id].push_back(std::move(m.text));
  }
  std::vector<SentimentSummary> out;
  for (const auto &[entity_id, texts] : masked) {
    std::vector<SentimentLabel> labels;
    int excluded = 0;
    try {
      labels = gateway.sentiment(texts);
    } catch (const ScorerError &) {
      // Fall back to per-entry calls so one failing entry only excludes itself.
      for (const auto &t : texts) {
        try {
          labels.push_back(gateway.sentiment({t}).front());
        } catch (const ScorerError &) {
          ++excluded;
        }
      }
    }
    if (labels.empty()) continue;
    SentimentSummary s = summarize_labels(entity_id, labels);
    s.excluded = excluded;
    s.unmasked = unmasked[entity_id];
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

std::string fmt(const char *spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

std::string format_sentiment_tsv(const std::vector<SentimentSummary> &rows) {
  std::string out = "entity\tn\tpos_pct\tneu_pct\tneg_pct\n";
  for (const auto &r : rows) {
    out += r.entity_id + '\t' + std::to_string(r.n) + '\t' + fmt("%.1f", r.pos_pct) +
           '\t' + fmt("%.1f", r.neu_pct) + '\t' + fmt("%.1f", r.neg_pct) + '\n';
  }
  return out;
}

std::vector<std::string> tokenize_po(const Triple &triple,
                                     const std::set<std::string> &stopwords) {
  std::vector<std::string> out;
  for (const auto &tok :
       text::normalized_tokens(triple.predicate + " " + triple.object)) {
    if (!stopwords.count(tok)) out.push_back(tok);
  }
  return out;
}

CountTable count_tokens(const std::vector<KgEntry> &entries,
                        const std::set<std::string> &stopwords) {
  CountTable counts;
  for (const auto &e : entries) {
    for (const auto &tok : tokenize_po(e.triple, stopwords)) {
      ++counts[{e.entity_id, tok}];
    }
  }
  return counts;
}

const AssociationCell *AssociationTable::find(std::string_view entity,
                                              std::string_view token) const {
  auto e = cells.find(std::string(entity));
  if (e == cells.end()) return nullptr;
  auto w = e->second.find(std::string(token));
  return w == e->second.end() ? nullptr : &w->second;
}

std::vector<std::string> AssociationTable::entities() const {
  std::vector<std::string> out;
  for (const auto &[e, _] : cells) out.push_back(e);
  return out;
}

AssociationTable association_from_counts(const CountTable &counts) {
  long long total = 0;
  std::map<std::string, long long> entity_totals;
  std::map<std::string, long long> token_totals;
  for (const auto &[key, c] : counts) {
    if (c < 0) throw DataError("association: negative count");
    if (c == 0) continue;
    total += c;
    entity_totals[key.first] += c;
    token_totals[key.second] += c;
  }
  if (total == 0) throw EmptyCorpus("association table has no tokens");

  const double n = static_cast<double>(total);
  AssociationTable table;
  for (const auto &[key, c] : counts) {
    if (c == 0) continue;
    const double p_ew = c / n;
    const double p_e = entity_totals[key.first] / n;
    const double p_w = token_totals[key.second] / n;
    AssociationCell cell;
    cell.count = c;
    cell.pmi = std::log(p_ew / (p_e * p_w));
    cell.rel_freq = static_cast<double>(c) / static_cast<double>(entity_totals[key.first]);
    table.cells[key.first][key.second] = cell;
  }
  // pmi_others sums over entities that co-occur with w; absent pairs are 0.
  for (auto &[entity, tokens] : table.cells) {
    for (auto &[token, cell] : tokens) {
      double others = 0.0;
      for (const auto &[other, other_tokens] : table.cells) {
        if (other == entity) continue;
        auto it = other_tokens.find(token);
        if (it != other_tokens.end()) others += it->second.pmi;
      }
      cell.pmi_others = others;
      cell.alpha = (cell.pmi - cell.pmi_others) * cell.rel_freq;
    }
  }
  return table;
}

AssociationTable association(const std::vector<KgEntry> &entries,
                             const std::set<std::string> &stopwords) {
  return association_from_counts(count_tokens(entries, stopwords));
}

std::vector<RankedToken> top_tokens(const AssociationTable &table,
                                    std::string_view entity, std::size_t k) {
  auto it = table.cells.find(std::string(entity));
  if (it == table.cells.end()) {
    throw DataError("top_tokens: unknown entity '" + std::string(entity) + "'");
  }
  std::vector<RankedToken> ranked;
  for (const auto &[token, cell] : it->second) ranked.push_back({token, cell, 0});
  std::sort(ranked.begin(), ranked.end(), [](const RankedToken &a, const RankedToken &b) {
    if (a.cell.alpha != b.cell.alpha) return a.cell.alpha > b.cell.alpha;
    if (a.cell.count != b.cell.count) return a.cell.count > b.cell.count;
    return a.token < b.token;
  });
  if (ranked.size() > k) ranked.resize(k);
  for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = static_cast<int>(i + 1);
  return ranked;
}

std::string format_association_tsv(const AssociationTable &table) {
  std::string out = "entity\ttoken\tcount\tpi\tpi_bar\tf\talpha\trank\n";
  for (const auto &entity : table.entities()) {
    for (const auto &r : top_tokens(table, entity, SIZE_MAX)) {
      out += entity + '\t' + r.token + '\t' + std::to_string(r.cell.count) + '\t' +
             fmt("%.9f", r.cell.pmi) + '\t' + fmt("%.9f", r.cell.pmi_others) + '\t' +
             fmt("%.9f", r.cell.rel_freq) + '\t' + fmt("%.9f", r.cell.alpha) + '\t' +
             std::to_string(r.rank) + '\n';
    }
  }
  return out;
}

std::string format_summary(const AssociationTable &table, const KgStats &kg_stats,
                           const PipelineConfig &config, std::size_t k) {
  std::string out = "Entity\t#Instances\tTop tokens (alpha)\n";
  for (const auto &[entity_id, count] : kg_stats.per_entity_counts) {
    const EntitySpec *spec = config.find_entity(entity_id);
    std::string name = spec ? spec->display_name : entity_id;
    std::vector<std::string> tokens;
    if (table.cells.count(entity_id)) {
      for (const auto &r : top_tokens(table, entity_id, k)) tokens.push_back(r.token);
    }
    out += name + '\t' + std::to_string(count) + '\t' + text::join(tokens, ", ") + '\n';
  }
  out += "Total\t" + std::to_string(kg_stats.total) + "\t\n";
  return out;
}

}  // namespace stereokg
