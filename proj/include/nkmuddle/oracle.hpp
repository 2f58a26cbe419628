#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "nkmuddle/evaluator.hpp"
#include "nkmuddle/landscape.hpp"

namespace nkmuddle {

struct OracleReport {
  double global_max_fitness = 0.0;
  Configuration global_max_config;
  std::uint64_t local_optima_count = 0;
  std::uint64_t n_enumerated = 0;
};

// True iff no hamming-one neighbor is strictly better. Uses the same
// candidate evaluation as the search algorithms, so the two can never
// disagree on knife-edge comparisons.
inline bool is_local_optimum(const Landscape& land, const Configuration& config) {
  Evaluator ev(land, config);
  const double current = ev.fitness();
  for (std::uint32_t i = 0; i < land.n; ++i)
    if (ev.candidate_fitness(i) > current) return false;
  return true;
}

// Exhaustive ground truth: enumerate all 2^n configurations in Gray-code
// order (one flip per visit), track the global argmax (lexicographically
// lowest configuration on exact ties) and count local optima.
inline OracleReport brute_force_optimum(const Landscape& land) {
  if (land.n > 24)
    throw std::invalid_argument("brute force enumeration is limited to n <= 24 (n=" +
                                std::to_string(land.n) + ")");
  const std::uint64_t total = std::uint64_t{1} << land.n;

  Configuration config;
  config.bits.assign(land.n, 0);
  Evaluator ev(land, std::move(config));

  OracleReport report;
  report.n_enumerated = total;
  report.global_max_fitness = ev.fitness();
  report.global_max_config = ev.config();

  for (std::uint64_t idx = 0;;) {
    const double f = ev.fitness();
    if (f > report.global_max_fitness) {
      report.global_max_fitness = f;
      report.global_max_config = ev.config();
    } else if (f == report.global_max_fitness) {
      const auto& cur = ev.config().bits;
      const auto& best = report.global_max_config.bits;
      if (std::lexicographical_compare(cur.begin(), cur.end(), best.begin(), best.end()))
        report.global_max_config = ev.config();
    }

    bool local_opt = true;
    for (std::uint32_t i = 0; i < land.n && local_opt; ++i)
      if (ev.candidate_fitness(i) > f) local_opt = false;
    if (local_opt) ++report.local_optima_count;

    ++idx;
    if (idx == total) break;
    ev.apply(static_cast<std::uint32_t>(std::countr_zero(idx)));
  }
  return report;
}

}  // namespace nkmuddle
