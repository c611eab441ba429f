#include "stereokg/clustering.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>

#include "stereokg/errors.h"
#include "stereokg/hashing.h"
#include "stereokg/io.h"
#include "stereokg/text.h"

namespace stereokg {

using io::Json;

double EmbeddingVector::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

double cosine(const EmbeddingVector &a, const EmbeddingVector &b) {
  if (a.dim() != b.dim()) throw DataError("cosine: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a.values[i] * b.values[i];
  return s;
}

std::vector<EmbeddingVector> embed(const ScorerGateway &gateway,
                                   const std::vector<std::string> &texts) {
  std::vector<EmbeddingVector> out;
  if (texts.empty()) return out;
  auto raw = gateway.embed(texts);
  out.reserve(raw.size());
  const std::size_t dim = raw.front().size();
  for (auto &v : raw) {
    if (v.size() != dim) {
      throw DataError("embedding dimension mismatch within batch (" +
                      std::to_string(dim) + " vs " + std::to_string(v.size()) + ")");
    }
    EmbeddingVector e{std::move(v)};
    double n = e.norm();
    if (n > 0.0) {
      for (double &x : e.values) x /= n;
    }
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

// Row i of the thresholded similarity graph, ascending.
class SimilarityRows {
 public:
  SimilarityRows(std::span<const EmbeddingVector> e, double threshold)
      : e_(e), threshold_(threshold) {
    const std::size_t n = e.size();
    if (n <= kDenseSimilarityLimit) {
      rows_.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        rows_[i].push_back(i);
        for (std::size_t j = i + 1; j < n; ++j) {
          if (cosine(e[i], e[j]) >= threshold) {
            rows_[i].push_back(j);
            rows_[j].push_back(i);
          }
        }
      }
      for (auto &r : rows_) std::sort(r.begin(), r.end());
      dense_ = true;
    }
  }

  std::vector<std::size_t> row(std::size_t i) const {
    if (dense_) return rows_[i];
    std::vector<std::size_t> r;
    for (std::size_t j = 0; j < e_.size(); ++j) {
      if (j == i || cosine(e_[i], e_[j]) >= threshold_) r.push_back(j);
    }
    return r;
  }

  std::size_t row_size(std::size_t i) const {
    return dense_ ? rows_[i].size() : row(i).size();
  }

 private:
  std::span<const EmbeddingVector> e_;
  double threshold_;
  bool dense_ = false;
  std::vector<std::vector<std::size_t>> rows_;
};

}  // namespace

std::vector<SentenceCluster> cluster(std::span<const EmbeddingVector> embeddings,
                                     double threshold, int min_size) {
  const std::size_t n = embeddings.size();
  std::vector<SentenceCluster> out;
  if (n == 0) return out;
  const std::size_t min_members = static_cast<std::size_t>(std::max(min_size, 1));

  SimilarityRows rows(embeddings, threshold);
  std::vector<std::pair<std::size_t, std::size_t>> candidates;  // (size, seed)
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t size = rows.row_size(i);
    if (size >= min_members) candidates.emplace_back(size, i);
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto &a, const auto &b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::vector<bool> taken(n, false);
  for (const auto &[size, seed] : candidates) {
    if (taken[seed]) continue;
    std::vector<std::size_t> members;
    for (std::size_t j : rows.row(seed)) {
      if (!taken[j]) members.push_back(j);
    }
    if (members.size() < min_members) continue;
    for (std::size_t j : members) taken[j] = true;
    SentenceCluster c;
    c.seed = seed;
    c.members = std::move(members);
    out.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (taken[i]) continue;
    SentenceCluster c;
    c.seed = i;
    c.members = {i};
    out.push_back(std::move(c));
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k].cluster_id = static_cast<int>(k);
  return out;
}

std::vector<SentenceCluster> cluster_assertions(
    const std::vector<MinedAssertion> &assertions, const ScorerGateway &gateway,
    const ClusteringParams &params, ClusteringReport *report) {
  std::map<std::string, std::vector<std::size_t>> by_entity;
  for (std::size_t i = 0; i < assertions.size(); ++i) {
    by_entity[assertions[i].entity_id].push_back(i);
  }

  std::vector<SentenceCluster> out;
  ClusteringReport local;
  local.assertions = assertions.size();
  for (const auto &[entity, indices] : by_entity) {
    std::vector<std::string> texts;
    texts.reserve(indices.size());
    for (std::size_t i : indices) texts.push_back(assertions[i].statement_text);
    const auto vectors = embed(gateway, texts);
    for (auto c : cluster(vectors, params.threshold, params.min_size)) {
      c.entity_id = entity;
      c.seed = indices[c.seed];
      for (auto &m : c.members) m = indices[m];
      std::sort(c.members.begin(), c.members.end());
      c.cluster_id = static_cast<int>(out.size());
      if (c.is_singleton()) {
        ++local.singletons;
      } else {
        ++local.clusters;
      }
      out.push_back(std::move(c));
    }
  }
  if (report) *report = local;
  return out;
}

std::string format_clusters(const std::vector<SentenceCluster> &clusters) {
  std::vector<Json> records;
  records.reserve(clusters.size());
  for (const auto &c : clusters) {
    Json j;
    j["cluster_id"] = c.cluster_id;
    j["entity"] = c.entity_id;
    j["seed"] = c.seed;
    j["members"] = c.members;
    j["singleton"] = c.is_singleton();
    records.push_back(std::move(j));
  }
  return io::to_jsonl(records);
}

std::vector<SentenceCluster> parse_clusters(std::string_view content) {
  std::vector<SentenceCluster> out;
  const auto lines = io::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    try {
      Json j = Json::parse(lines[i]);
      SentenceCluster c;
      c.cluster_id = j.at("cluster_id").get<int>();
      c.entity_id = j.at("entity").get<std::string>();
      c.seed = j.at("seed").get<std::size_t>();
      c.members = j.at("members").get<std::vector<std::size_t>>();
      if (c.members.empty()) throw DataError("cluster has no members");
      if (std::find(c.members.begin(), c.members.end(), c.seed) == c.members.end()) {
        throw DataError("seed is not a member");
      }
      if (j.at("singleton").get<bool>() != c.is_singleton()) {
        throw DataError("singleton flag disagrees with member count");
      }
      out.push_back(std::move(c));
    } catch (const Json::exception &e) {
      throw DataError("clusters line " + std::to_string(i + 1) + ": " + e.what());
    } catch (const DataError &e) {
      throw DataError("clusters line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

std::vector<SentenceCluster> load_clusters(const std::filesystem::path &path) {
  return parse_clusters(io::read_file(path));
}

namespace {

std::vector<std::uint8_t> to_bytes(const EmbeddingVector &v) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(v.dim() * 8);
  for (double d : v.values) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(d);
    for (int k = 0; k < 8; ++k) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
  }
  return bytes;
}

EmbeddingVector from_bytes(const std::vector<std::uint8_t> &bytes) {
  if (bytes.size() % 8 != 0) throw DataError("embedding cache: truncated vector");
  EmbeddingVector v;
  for (std::size_t i = 0; i < bytes.size(); i += 8) {
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(bytes[i + k]) << (8 * k);
    v.values.push_back(std::bit_cast<double>(bits));
  }
  return v;
}

}  // namespace

std::string format_embedding_cache(const std::vector<std::string> &texts,
                                   const std::vector<EmbeddingVector> &vectors) {
  if (texts.size() != vectors.size()) {
    throw DataError("embedding cache: texts and vectors differ in length");
  }
  std::vector<Json> records;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    records.push_back({{"key", hex64(fnv1a64(texts[i]))},
                       {"dim", vectors[i].dim()},
                       {"vector", base64_encode(to_bytes(vectors[i]))}});
  }
  return io::to_jsonl(records);
}

std::vector<std::pair<std::string, EmbeddingVector>> parse_embedding_cache(
    std::string_view content) {
  std::vector<std::pair<std::string, EmbeddingVector>> out;
  for (const auto &line : io::split_lines(content)) {
    if (text::trim(line).empty()) continue;
    try {
      Json j = Json::parse(line);
      EmbeddingVector v = from_bytes(base64_decode(j.at("vector").get<std::string>()));
      if (v.dim() != j.at("dim").get<std::size_t>()) {
        throw DataError("embedding cache: dim field disagrees with vector");
      }
      out.emplace_back(j.at("key").get<std::string>(), std::move(v));
    } catch (const Json::exception &e) {
      throw DataError(std::string("embedding cache: ") + e.what());
    }
  }
  return out;
}

}  // namespace stereokg
