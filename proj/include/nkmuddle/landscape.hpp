#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nkmuddle/rng.hpp"

namespace nkmuddle {

enum class InteractionScheme { random, adjacent };

inline std::string to_string(InteractionScheme s) {
  return s == InteractionScheme::random ? "random" : "adjacent";
}

inline InteractionScheme scheme_from_string(const std::string& s) {
  if (s == "random") return InteractionScheme::random;
  if (s == "adjacent") return InteractionScheme::adjacent;
  throw std::invalid_argument("unknown interaction scheme '" + s +
                              "' (expected 'random' or 'adjacent')");
}

// One point on the landscape: a length-n vector of {0,1}.
struct Configuration {
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }
  bool operator==(const Configuration&) const = default;
};

inline std::string config_to_string(const Configuration& c) {
  std::string s;
  s.reserve(c.bits.size());
  for (auto b : c.bits) s.push_back(b ? '1' : '0');
  return s;
}

inline Configuration config_from_string(const std::string& s) {
  Configuration c;
  c.bits.reserve(s.size());
  for (char ch : s) {
    if (ch != '0' && ch != '1')
      throw std::invalid_argument("configuration string must be over {0,1}");
    c.bits.push_back(ch == '1' ? 1 : 0);
  }
  return c;
}

// Per-node fitness contributions of one configuration.
struct ContributionProfile {
  std::vector<double> values;
};

// Mean over the values, summed in ascending node order. Every total-fitness
// figure in the library goes through this one summation so that identical
// configurations always compare bit-for-bit equal, regardless of whether
// they were evaluated from scratch or incrementally.
inline double profile_mean(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Immutable NK problem instance. Safe to share across threads once built.
struct Landscape {
  std::uint64_t seed = 0;
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  InteractionScheme scheme = InteractionScheme::random;
  // neighbors[i]: the k interaction partners of node i, ascending, i excluded.
  std::vector<std::vector<std::uint32_t>> neighbors;
  // tables[i][r]: fitness contribution of node i when its lookup row is r.
  // This is column i of the 2^(k+1) x n fitness matrix.
  std::vector<std::vector<double>> tables;

  // Flipping node f shifts the lookup row of every node in influence[f] by
  // +/- weight (+ when bit f goes 0->1). Contains f itself (weight 2^k) and
  // every node whose neighbor list includes f.
  struct RowShift {
    std::uint32_t node;
    std::uint64_t weight;
  };
  std::vector<std::vector<RowShift>> influence;

  std::uint64_t rows() const { return std::uint64_t{1} << (k + 1); }
};

namespace detail {

inline void build_influence(Landscape& land) {
  land.influence.assign(land.n, {});
  for (std::uint32_t i = 0; i < land.n; ++i)
    land.influence[i].push_back({i, std::uint64_t{1} << land.k});
  for (std::uint32_t j = 0; j < land.n; ++j) {
    const auto& nb = land.neighbors[j];
    for (std::uint32_t pos = 0; pos < nb.size(); ++pos) {
      const std::uint64_t w = std::uint64_t{1} << (land.k - 1 - pos);
      land.influence[nb[pos]].push_back({j, w});
    }
  }
  for (auto& list : land.influence)
    std::sort(list.begin(), list.end(),
              [](const Landscape::RowShift& a, const Landscape::RowShift& b) {
                return a.node < b.node;
              });
}

inline void check_params(std::uint32_t n, std::uint32_t k) {
  if (n == 0) throw std::invalid_argument("landscape requires n >= 1");
  if (k > n - 1)
    throw std::invalid_argument("landscape requires k <= n-1 (n=" +
                                std::to_string(n) + ", k=" + std::to_string(k) + ")");
}

}  // namespace detail

// Deterministic instance construction. Consumption order of the seeded
// stream is fixed: neighbor draws for nodes 0..n-1 first, then the fitness
// matrix column by column, rows ascending.
inline Landscape build_landscape(std::uint64_t seed, std::uint32_t n, std::uint32_t k,
                                 InteractionScheme scheme) {
  detail::check_params(n, k);
  Landscape land;
  land.seed = seed;
  land.n = n;
  land.k = k;
  land.scheme = scheme;
  land.neighbors.assign(n, {});

  Rng rng(seed);
  if (scheme == InteractionScheme::random) {
    std::vector<std::uint32_t> pool(n - 1);
    for (std::uint32_t i = 0; i < n; ++i) {
      std::uint32_t w = 0;
      for (std::uint32_t v = 0; v < n; ++v)
        if (v != i) pool[w++] = v;
      // partial Fisher-Yates: first k entries are a uniform k-subset
      for (std::uint32_t t = 0; t < k; ++t) {
        const auto j = t + rng.uniform_below(pool.size() - t);
        std::swap(pool[t], pool[j]);
      }
      auto& nb = land.neighbors[i];
      nb.assign(pool.begin(), pool.begin() + k);
      std::sort(nb.begin(), nb.end());
    }
  } else {
    const std::uint32_t succ = (k + 1) / 2, pred = k / 2;
    for (std::uint32_t i = 0; i < n; ++i) {
      auto& nb = land.neighbors[i];
      for (std::uint32_t d = 1; d <= succ; ++d) nb.push_back((i + d) % n);
      for (std::uint32_t d = 1; d <= pred; ++d) nb.push_back((i + n - d) % n);
      std::sort(nb.begin(), nb.end());
    }
  }

  land.tables.assign(n, {});
  const std::uint64_t rows = land.rows();
  for (std::uint32_t col = 0; col < n; ++col) {
    auto& table = land.tables[col];
    table.resize(rows);
    for (std::uint64_t r = 0; r < rows; ++r) table[r] = rng.unit_real();
  }

  detail::build_influence(land);
  return land;
}

// Assemble an instance from explicit parts (hand fixtures, JSON import).
// `matrix` is row-major: matrix[r][col] for r in [0, 2^(k+1)).
inline Landscape landscape_from_parts(std::uint64_t seed, std::uint32_t n, std::uint32_t k,
                                      InteractionScheme scheme,
                                      std::vector<std::vector<std::uint32_t>> neighbors,
                                      const std::vector<std::vector<double>>& matrix) {
  detail::check_params(n, k);
  if (neighbors.size() != n)
    throw std::invalid_argument("neighbors must have one list per node");
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& nb = neighbors[i];
    if (nb.size() != k)
      throw std::invalid_argument("neighbor list of node " + std::to_string(i) +
                                  " must have exactly k entries");
    for (std::uint32_t pos = 0; pos < nb.size(); ++pos) {
      if (nb[pos] >= n || nb[pos] == i)
        throw std::invalid_argument("neighbor list of node " + std::to_string(i) +
                                    " contains an invalid index");
      if (pos > 0 && nb[pos - 1] >= nb[pos])
        throw std::invalid_argument("neighbor list of node " + std::to_string(i) +
                                    " must be strictly ascending");
    }
  }
  const std::uint64_t rows = std::uint64_t{1} << (k + 1);
  if (matrix.size() != rows)
    throw std::invalid_argument("fitness matrix must have 2^(k+1) rows");
  Landscape land;
  land.seed = seed;
  land.n = n;
  land.k = k;
  land.scheme = scheme;
  land.neighbors = std::move(neighbors);
  land.tables.assign(n, std::vector<double>(rows));
  for (std::uint64_t r = 0; r < rows; ++r) {
    if (matrix[r].size() != n)
      throw std::invalid_argument("fitness matrix row " + std::to_string(r) +
                                  " must have n columns");
    for (std::uint32_t col = 0; col < n; ++col) {
      const double v = matrix[r][col];
      if (!(v >= 0.0 && v < 1.0))
        throw std::invalid_argument("fitness matrix entries must lie in [0,1)");
      land.tables[col][r] = v;
    }
  }
  detail::build_influence(land);
  return land;
}

// Row of the fitness matrix selecting node's contribution: focal bit is the
// most significant, the k neighbor bits follow in ascending-index order.
inline std::uint64_t contribution_row_index(const Landscape& land, const Configuration& config,
                                            std::uint32_t node) {
  if (node >= land.n) throw std::out_of_range("node index out of range");
  assert(config.size() == land.n);
  std::uint64_t r = std::uint64_t{config.bits[node]} << land.k;
  const auto& nb = land.neighbors[node];
  for (std::uint32_t pos = 0; pos < nb.size(); ++pos)
    r |= std::uint64_t{config.bits[nb[pos]]} << (land.k - 1 - pos);
  return r;
}

inline double node_contribution(const Landscape& land, const Configuration& config,
                                std::uint32_t node) {
  return land.tables[node][contribution_row_index(land, config, node)];
}

inline ContributionProfile contribution_profile(const Landscape& land,
                                                const Configuration& config) {
  if (config.size() != land.n)
    throw std::invalid_argument("configuration length does not match landscape n");
  ContributionProfile profile;
  profile.values.resize(land.n);
  for (std::uint32_t i = 0; i < land.n; ++i)
    profile.values[i] = node_contribution(land, config, i);
  return profile;
}

inline double total_fitness(const Landscape& land, const Configuration& config) {
  return profile_mean(contribution_profile(land, config).values);
}

inline Configuration flip_node(const Configuration& config, std::uint32_t node) {
  if (node >= config.size()) throw std::out_of_range("node index out of range");
  Configuration out = config;
  out.bits[node] ^= 1;
  return out;
}

inline std::uint32_t hamming_distance(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("hamming distance requires equal lengths");
  std::uint32_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a.bits[i] != b.bits[i];
  return d;
}

struct DeltaFitness {
  double fitness;
  ContributionProfile profile;
};

// Fitness after flipping `node`, recomputing only the contributions of the
// flipped node and of the nodes that depend on it. `profile` must belong to
// `config`; staleness is a programming error caught by debug assertions.
inline DeltaFitness delta_fitness(const Landscape& land, const Configuration& config,
                                  const ContributionProfile& profile, std::uint32_t node) {
  if (node >= land.n) throw std::out_of_range("node index out of range");
  if (config.size() != land.n || profile.values.size() != land.n)
    throw std::invalid_argument("configuration/profile length does not match landscape n");
#ifndef NDEBUG
  for (const auto& shift : land.influence[node])
    assert(profile.values[shift.node] ==
           land.tables[shift.node][contribution_row_index(land, config, shift.node)]);
#endif
  DeltaFitness out{0.0, profile};
  Configuration flipped = config;
  flipped.bits[node] ^= 1;
  for (const auto& shift : land.influence[node])
    out.profile.values[shift.node] = node_contribution(land, flipped, shift.node);
  out.fitness = profile_mean(out.profile.values);
  return out;
}

}  // namespace nkmuddle
