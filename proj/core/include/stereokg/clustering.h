#ifndef STEREOKG_CLUSTERING_H_
#define STEREOKG_CLUSTERING_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stereokg/config.h"
#include "stereokg/mining.h"
#include "stereokg/scorer.h"

namespace stereokg {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  double norm() const;
  bool operator==(const EmbeddingVector &) const = default;
};

// Dot product; equals cosine similarity for unit vectors.
double cosine(const EmbeddingVector &a, const EmbeddingVector &b);

struct SentenceCluster {
  int cluster_id = 0;
  std::string entity_id;
  std::size_t seed = 0;
  std::vector<std::size_t> members;  // ascending, includes seed

  bool is_singleton() const { return members.size() == 1; }
  bool operator==(const SentenceCluster &) const = default;
};

// Embeds through the gateway and re-normalizes to unit length. Throws
// DataError if the backend returns vectors of differing dimension.
std::vector<EmbeddingVector> embed(const ScorerGateway &gateway,
                                   const std::vector<std::string> &texts);

// Threshold community detection over unit vectors:
//   1. C(i) = { j : cos(e_i, e_j) >= threshold }, i included;
//   2. keep candidates with |C(i)| >= min_size;
//   3. order by |C(i)| descending, then seed index ascending;
//   4. accept greedily, removing members already taken; a candidate whose
//      seed is taken, or which falls below min_size, is discarded;
//   5. everything left over becomes a singleton.
// Accepted communities come first in acceptance order, then singletons in
// index order. Indices refer to `embeddings`; cluster_id is the position in
// the returned list and entity_id is left empty.
std::vector<SentenceCluster> cluster(std::span<const EmbeddingVector> embeddings,
                                     double threshold, int min_size);

// Above this size the similarity matrix is not materialized and rows are
// computed on demand.
inline constexpr std::size_t kDenseSimilarityLimit = 20000;

struct ClusteringReport {
  std::size_t assertions = 0;
  std::size_t clusters = 0;
  std::size_t singletons = 0;
};

// Clusters each entity's assertions separately (in mined-file order) and
// returns clusters whose members are indices into `assertions`, with
// cluster ids dense over (entity id, per-entity order).
std::vector<SentenceCluster> cluster_assertions(
    const std::vector<MinedAssertion> &assertions, const ScorerGateway &gateway,
    const ClusteringParams &params, ClusteringReport *report = nullptr);

std::string format_clusters(const std::vector<SentenceCluster> &clusters);
std::vector<SentenceCluster> parse_clusters(std::string_view content);
std::vector<SentenceCluster> load_clusters(const std::filesystem::path &path);

// Embedding cache: one JSONL record per text hash with a base64 vector of
// little-endian IEEE-754 doubles: {"key": hex, "dim": int, "vector": b64}.
std::string format_embedding_cache(const std::vector<std::string> &texts,
                                   const std::vector<EmbeddingVector> &vectors);
std::vector<std::pair<std::string, EmbeddingVector>> parse_embedding_cache(
    std::string_view content);

}  // namespace stereokg

#endif  // STEREOKG_CLUSTERING_H_
