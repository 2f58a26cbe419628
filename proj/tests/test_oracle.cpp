#include <catch2/catch_amalgamated.hpp>

#include <cstdint>

#include "fixtures.hpp"
#include "nkmuddle/oracle.hpp"
#include "nkmuddle/search.hpp"

using namespace nkmuddle;
using fixtures::conf;
using fixtures::l2;

namespace {

Configuration random_config(Rng& rng, std::uint32_t n) {
  Configuration c;
  for (std::uint32_t i = 0; i < n; ++i) c.bits.push_back(rng.uniform_below(2));
  return c;
}

}  // namespace

TEST_CASE("oracle report for the L2 fixture") {
  const auto report = brute_force_optimum(l2());
  CHECK(report.global_max_config == conf({1, 1}));
  CHECK_THAT(report.global_max_fitness, Catch::Matchers::WithinAbs(0.60, 1e-15));
  CHECK(report.local_optima_count == 1);
  CHECK(report.n_enumerated == 4);
}

TEST_CASE("L2 local optimum predicate") {
  const Landscape land = l2();
  CHECK(is_local_optimum(land, conf({1, 1})));
  CHECK_FALSE(is_local_optimum(land, conf({0, 0})));
  CHECK_FALSE(is_local_optimum(land, conf({1, 0})));
  CHECK_FALSE(is_local_optimum(land, conf({0, 1})));
}

TEST_CASE("separable landscapes have exactly one peak") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Landscape land = build_landscape(seed, 10, 0, InteractionScheme::random);
    const auto report = brute_force_optimum(land);
    CHECK(report.local_optima_count == 1);
    CHECK(is_local_optimum(land, report.global_max_config));
  }
}

TEST_CASE("ruggedness grows with k") {
  double mean_k2 = 0.0, mean_k9 = 0.0;
  const int seeds = 100;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    mean_k2 += brute_force_optimum(build_landscape(seed, 10, 2, InteractionScheme::random))
                   .local_optima_count;
    mean_k9 += brute_force_optimum(build_landscape(seed, 10, 9, InteractionScheme::random))
                   .local_optima_count;
  }
  mean_k2 /= seeds;
  mean_k9 /= seeds;
  CHECK(mean_k9 > mean_k2);
  CHECK(mean_k9 > 10.0);  // k=n-1 landscapes are strongly multi-peaked
}

TEST_CASE("oracle refuses oversized instances") {
  Landscape land = build_landscape(1, 8, 2, InteractionScheme::random);
  land.n = 25;  // forged size; only the guard is under test
  CHECK_THROWS_AS(brute_force_optimum(land), std::invalid_argument);
}

TEST_CASE("oracle agrees with the search stack on small instances") {
  Rng rng(31);
  for (std::uint32_t k : {0u, 3u, 7u, 11u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Landscape land = build_landscape(600 + seed, 12, k, InteractionScheme::random);
      const auto report = brute_force_optimum(land);
      const auto init = random_config(rng, land.n);
      const auto sa = steepest_ascent(land, init, SearchBudget{100000});
      CHECK(sa.best_fitness <= report.global_max_fitness);
      REQUIRE(sa.termination == Termination::local_stop);
      CHECK(is_local_optimum(land, sa.final_config));
      CHECK(report.global_max_fitness == total_fitness(land, report.global_max_config));
    }
  }
}
