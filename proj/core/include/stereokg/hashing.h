#ifndef STEREOKG_HASHING_H_
#define STEREOKG_HASHING_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace stereokg {

// 64-bit FNV-1a. Used for stub scorers, cache keys, and config digests, so
// its output is part of the on-disk and wire contract.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

std::string base64_encode(const std::vector<std::uint8_t> &bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

// Portable seeded generator: std::mt19937_64 for the stream plus an unbiased
// bounded draw that does not depend on the standard library's distributions.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::vector<T> &items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stereokg

#endif  // STEREOKG_HASHING_H_
