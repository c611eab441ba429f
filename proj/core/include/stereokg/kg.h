#ifndef STEREOKG_KG_H_
#define STEREOKG_KG_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stereokg/clustering.h"
#include "stereokg/config.h"
#include "stereokg/mining.h"
#include "stereokg/triples.h"

namespace stereokg {

enum class Derivation { kSingletonDerived, kClusterDerived };

std::string_view derivation_name(Derivation d);
Derivation parse_derivation(std::string_view name);

struct KgEntry {
  int entry_id = 0;
  std::string entity_id;
  Triple triple;
  int cluster_id = 0;
  int member_count = 1;
  std::vector<std::string> member_sentences;  // verbatim mined sentences
  Derivation derivation = Derivation::kSingletonDerived;
  std::vector<Provenance> provenance;

  bool operator==(const KgEntry &) const = default;
};

struct BuildReport {
  std::size_t clusters = 0;
  std::size_t entries = 0;
  std::size_t unrepresentable = 0;
};

// One entry per cluster that has a representative; entry ids are dense
// from 0 in (entity id, cluster id) order.
std::vector<KgEntry> build_kg(const std::vector<MinedAssertion> &assertions,
                              const std::vector<SentenceCluster> &clusters,
                              const std::vector<Representative> &representatives,
                              BuildReport *report = nullptr);

struct KgStats {
  std::map<std::string, int> per_entity_counts;
  int total = 0;
};

KgStats stats(const std::vector<KgEntry> &entries);

// Optional context for checking the post-filter triple invariants on load.
struct KgValidation {
  const std::vector<EntitySpec> *entities = nullptr;
  FilterLexicons lexicons;
};

inline constexpr std::string_view kKgFormat = "stereokg";
inline constexpr int kKgVersion = 1;

// Throws DataError naming the entry id.
void validate_entry(const KgEntry &entry, const KgValidation *validation = nullptr);

// Header line {"format":"stereokg","version":1} then one entry per line.
std::string format_kg(const std::vector<KgEntry> &entries);
std::vector<KgEntry> parse_kg(std::string_view content,
                              const KgValidation *validation = nullptr);
void save_kg(const std::vector<KgEntry> &entries, const std::filesystem::path &path);
std::vector<KgEntry> load_kg(const std::filesystem::path &path,
                             const KgValidation *validation = nullptr);

// entity, subject, predicate, object, member_count
std::string format_kg_tsv(const std::vector<KgEntry> &entries);

}  // namespace stereokg

#endif  // STEREOKG_KG_H_
