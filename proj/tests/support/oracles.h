#ifndef STEREOKG_TESTS_SUPPORT_ORACLES_H_
#define STEREOKG_TESTS_SUPPORT_ORACLES_H_

// Independent reference implementations used to check the library.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stereokg/analytics.h"
#include "stereokg/clustering.h"
#include "stereokg/eval.h"
#include "test_support.h"

namespace stereokg::testing {

using Rational = boost::multiprecision::cpp_rational;

struct OracleCell {
  double pi = 0.0;
  double pi_bar = 0.0;
  double f = 0.0;
  double alpha = 0.0;
};

// Exact log of a positive rational: ln(num) - ln(den), each taken from an
// exact integer. Integers beyond double range do not occur in fixtures.
inline double exact_log(const Rational &r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  return std::log(num.convert_to<long double>()) - std::log(den.convert_to<long double>());
}

// Probabilities as exact rationals over the total count N, then
//   pi(e,w)     = log p(e,w) / (p(e) p(w))
//   pi_bar(e,w) = sum over other entities e' that co-occur with w of pi(e',w)
//   f(e,w)      = count(e,w) / sum_w' count(e,w')
//   alpha       = (pi - pi_bar) * f
inline std::map<std::pair<std::string, std::string>, OracleCell> oracle_association(
    const CountTable &counts) {
  Rational n = 0;
  std::map<std::string, Rational> by_entity;
  std::map<std::string, Rational> by_token;
  for (const auto &[key, c] : counts) {
    n += c;
    by_entity[key.first] += c;
    by_token[key.second] += c;
  }
  std::map<std::pair<std::string, std::string>, double> pi;
  for (const auto &[key, c] : counts) {
    if (c == 0) continue;
    const Rational p_ew = Rational(c) / n;
    const Rational p_e = by_entity[key.first] / n;
    const Rational p_w = by_token[key.second] / n;
    pi[key] = exact_log(p_ew / (p_e * p_w));
  }
  std::map<std::pair<std::string, std::string>, OracleCell> out;
  for (const auto &[key, c] : counts) {
    if (c == 0) continue;
    OracleCell cell;
    cell.pi = pi[key];
    for (const auto &[other, value] : pi) {
      if (other.second == key.second && other.first != key.first) cell.pi_bar += value;
    }
    const Rational f = Rational(c) / by_entity[key.first];
    cell.f = f.convert_to<double>();
    cell.alpha = static_cast<double>(
        (static_cast<long double>(cell.pi) - static_cast<long double>(cell.pi_bar)) *
        f.convert_to<long double>());
    out[key] = cell;
  }
  return out;
}

// Random count table: up to `max_pairs` (entity, token) pairs, with tokens
// shared across entities often enough to exercise pi_bar.
inline CountTable random_counts(Gen &gen, int max_pairs = 50) {
  const int n_entities = gen.integer(1, 6);
  const int n_tokens = gen.integer(1, 15);
  const int pairs = gen.integer(1, max_pairs);
  CountTable counts;
  for (int i = 0; i < pairs; ++i) {
    const std::string e = "e" + std::to_string(gen.integer(0, n_entities - 1));
    const std::string w = "w" + std::to_string(gen.integer(0, n_tokens - 1));
    counts[{e, w}] = gen.integer(1, 40);
  }
  return counts;
}

// O(n^2) community detection on the full similarity matrix.
inline std::vector<std::vector<std::size_t>> oracle_communities(
    const std::vector<EmbeddingVector> &emb, double threshold, int min_size) {
  const std::size_t n = emb.size();
  std::vector<std::vector<bool>> near(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t d = 0; d < emb[i].dim(); ++d) dot += emb[i].values[d] * emb[j].values[d];
      near[i][j] = i == j || dot >= threshold;
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> order;  // (size, seed)
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t size = std::count(near[i].begin(), near[i].end(), true);
    if (static_cast<int>(size) >= min_size) order.emplace_back(size, i);
  }
  std::sort(order.begin(), order.end(), [](const auto &a, const auto &b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<bool> taken(n, false);
  std::vector<std::vector<std::size_t>> out;
  for (const auto &[size, seed] : order) {
    if (taken[seed]) continue;
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < n; ++j) {
      if (near[seed][j] && !taken[j]) members.push_back(j);
    }
    if (static_cast<int>(members.size()) < min_size) continue;
    for (std::size_t j : members) taken[j] = true;
    out.push_back(members);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!taken[i]) out.push_back({i});
  }
  return out;
}

// Unit vectors around a few planted centres plus uniform noise points.
inline std::vector<EmbeddingVector> planted_embeddings(Gen &gen, std::size_t n,
                                                       std::size_t dim) {
  auto unit = [&](std::vector<double> v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double &x : v) x /= norm;
    return EmbeddingVector{v};
  };
  auto random_vec = [&] {
    std::vector<double> v(dim);
    for (double &x : v) x = gen.real(-1.0, 1.0);
    return v;
  };
  std::vector<std::vector<double>> centres;
  for (int c = gen.integer(1, 5); c > 0; --c) centres.push_back(random_vec());
  std::vector<EmbeddingVector> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (gen.coin(0.3)) {
      out.push_back(unit(random_vec()));
      continue;
    }
    std::vector<double> v = gen.pick(centres);
    const double spread = gen.real(0.0, 0.4);
    for (double &x : v) x += gen.real(-spread, spread);
    out.push_back(unit(v));
  }
  return out;
}

// Mean over annotator pairs with shared items of the share of shared items
// with equal values, by enumerating every pair and every item.
inline double oracle_observed_agreement(const std::vector<AnnotationRecord> &records,
                                        Metric metric) {
  std::set<std::string> annotators;
  std::set<int> items;
  for (const auto &r : records) {
    annotators.insert(r.annotator_id);
    items.insert(r.item_id);
  }
  auto value = [&](const std::string &a, int item) -> int {
    for (const auto &r : records) {
      if (r.annotator_id == a && r.item_id == item) return metric_value(r, metric);
    }
    return -1;
  };
  const std::vector<std::string> ann(annotators.begin(), annotators.end());
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t a = 0; a < ann.size(); ++a) {
    for (std::size_t b = a + 1; b < ann.size(); ++b) {
      int shared = 0;
      int equal = 0;
      for (int item : items) {
        const int va = value(ann[a], item);
        const int vb = value(ann[b], item);
        if (va < 0 || vb < 0) continue;
        ++shared;
        equal += va == vb;
      }
      if (shared == 0) continue;
      sum += static_cast<double>(equal) / shared;
      ++pairs;
    }
  }
  return pairs ? sum / pairs : 0.0;
}

}  // namespace stereokg::testing

#endif  // STEREOKG_TESTS_SUPPORT_ORACLES_H_
