#ifndef STEREOKG_TESTS_SUPPORT_TEST_SUPPORT_H_
#define STEREOKG_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "stereokg/io.h"
#include "stereokg/kg.h"
#include "stereokg/text.h"

namespace stereokg::testing {

inline std::filesystem::path fixture_path(const std::string &name) {
  return std::filesystem::path(STEREOKG_FIXTURE_DIR) / name;
}

inline std::string read_fixture(const std::string &name) {
  return io::read_file(fixture_path(name));
}

// Tab-separated fixture rows with the header line removed.
inline std::vector<std::vector<std::string>> read_tsv_fixture(const std::string &name) {
  std::vector<std::vector<std::string>> rows;
  const auto lines = io::read_lines(fixture_path(name));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = lines[i].find('\t', start);
      fields.push_back(lines[i].substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    std::mt19937_64 gen((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
    for (int attempt = 0; attempt < 100; ++attempt) {
      path_ = std::filesystem::temp_directory_path() /
              ("stereokg-test-" + std::to_string(gen()));
      if (std::filesystem::create_directory(path_)) return;
    }
    throw std::runtime_error("could not create a temporary directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Small seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [lo, hi].
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  double real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }
  template <typename T>
  const T &pick(const std::vector<T> &items) {
    return items[static_cast<std::size_t>(integer(0, static_cast<int>(items.size()) - 1))];
  }
  std::mt19937_64 &engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline KgEntry make_entry(int id, std::string entity, std::string s, std::string p,
                          std::string o, int members = 1) {
  KgEntry e;
  e.entry_id = id;
  e.entity_id = std::move(entity);
  e.triple.subject = std::move(s);
  e.triple.predicate = std::move(p);
  e.triple.object = std::move(o);
  e.cluster_id = id;
  e.member_count = members;
  e.derivation = members > 1 ? Derivation::kClusterDerived : Derivation::kSingletonDerived;
  const std::string sentence =
      e.triple.subject + " " + e.triple.predicate + " " + e.triple.object;
  for (int i = 0; i < members; ++i) e.member_sentences.push_back(sentence);
  e.provenance.assign(static_cast<std::size_t>(members),
                      Provenance{Platform::kReddit, "p" + std::to_string(id)});
  return e;
}

}  // namespace stereokg::testing

#endif  // STEREOKG_TESTS_SUPPORT_TEST_SUPPORT_H_
