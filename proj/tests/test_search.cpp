#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "fixtures.hpp"
#include "nkmuddle/oracle.hpp"
#include "nkmuddle/search.hpp"
#include "scripted_stream.hpp"

using namespace nkmuddle;
using fixtures::conf;
using fixtures::l2;
using fixtures::ScriptedStream;

namespace {

Configuration random_config(Rng& rng, std::uint32_t n) {
  Configuration c;
  for (std::uint32_t i = 0; i < n; ++i) c.bits.push_back(rng.uniform_below(2));
  return c;
}

}  // namespace

TEST_CASE("random_initial_config is deterministic per stream and unbiased") {
  Rng a(11), b(11);
  CHECK(random_initial_config(a, 20) == random_initial_config(b, 20));

  Rng c(77);
  std::uint64_t ones = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i)
    for (auto bit : random_initial_config(c, 20).bits) ones += bit;
  const double mean = static_cast<double>(ones) / (20.0 * draws);
  CHECK(mean >= 0.49);
  CHECK(mean <= 0.51);

  Rng d(3);
  const auto single = random_initial_config(d, 1);
  REQUIRE(single.size() == 1);
  CHECK((single.bits[0] == 0 || single.bits[0] == 1));
}

TEST_CASE("steepest ascent walks the L2 hand trace") {
  const Landscape land = l2();
  const auto out = steepest_ascent(land, conf({0, 0}), SearchBudget{1000}, true);
  CHECK(out.best_config == conf({1, 1}));
  CHECK_THAT(out.best_fitness, Catch::Matchers::WithinAbs(0.60, 1e-15));
  CHECK(out.termination == Termination::local_stop);
  CHECK(out.steps_used == 3);
  CHECK(out.evaluations == 6);
  CHECK(out.best_config == out.final_config);
  CHECK(out.hamming_init_to_best == 2);
  REQUIRE(out.trajectory.size() == 3);
  CHECK(out.trajectory[0].proposal == "0");  // (0,0) -> (1,0)
  CHECK(out.trajectory[1].proposal == "1");  // (1,0) -> (1,1)
  CHECK(out.trajectory[2].accepted == false);
  CHECK(out.best_fitness == total_fitness(land, out.best_config));
}

TEST_CASE("steepest ascent from the optimum stops after one sweep") {
  const Landscape land = l2();
  const auto out = steepest_ascent(land, conf({1, 1}), SearchBudget{1000});
  CHECK(out.termination == Termination::local_stop);
  CHECK(out.final_config == conf({1, 1}));
  CHECK(out.evaluations == land.n);
  CHECK(out.hamming_init_to_best == 0);
}

TEST_CASE("steepest ascent on separable landscapes finds the global optimum") {
  Rng rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    const Landscape land = build_landscape(900 + trial, 12, 0, InteractionScheme::random);
    const auto init = random_config(rng, land.n);
    const auto out = steepest_ascent(land, init, SearchBudget{1000});
    const auto report = brute_force_optimum(land);
    CHECK(out.best_fitness == report.global_max_fitness);
    CHECK(out.termination == Termination::local_stop);
  }
}

TEST_CASE("centralized search accepts an improving proposed flip") {
  const Landscape land = l2();
  ScriptedStream stream;
  stream.ints = {1};  // untried is [0,1]; index 1 proposes node 1
  const auto out = centralized_search(land, conf({0, 0}), SearchBudget{1}, stream, true);
  REQUIRE(out.trajectory.size() == 1);
  CHECK(out.trajectory[0].proposal == "1");
  CHECK(out.trajectory[0].accepted);
  CHECK(out.final_config == conf({0, 1}));
  CHECK_THAT(out.best_fitness, Catch::Matchers::WithinAbs(0.45, 1e-15));
  CHECK(out.evaluations == 1);
}

TEST_CASE("centralized search proves a local stop after trying every node") {
  const Landscape land = l2();
  Rng rng(5);
  const auto out = centralized_search(land, conf({1, 1}), SearchBudget{1000}, rng);
  CHECK(out.termination == Termination::local_stop);
  CHECK(out.steps_used == 2);
  CHECK(out.evaluations == 2);
  CHECK(out.final_config == conf({1, 1}));
  CHECK(out.hamming_init_to_best == 0);
}

TEST_CASE("centralized search reaches the single peak of separable landscapes") {
  Rng rng(808);
  for (int trial = 0; trial < 20; ++trial) {
    const Landscape land = build_landscape(700 + trial, 12, 0, InteractionScheme::random);
    const auto init = random_config(rng, land.n);
    Rng walk(1000 + trial);
    const auto out = centralized_search(land, init, SearchBudget{10000}, walk);
    CHECK(out.best_fitness == brute_force_optimum(land).global_max_fitness);
    CHECK(out.termination == Termination::local_stop);
    CHECK(is_local_optimum(land, out.final_config));
  }
}

TEST_CASE("SA and CS are monotone and report best == final") {
  Rng rng(2023);
  for (std::uint32_t k : {2u, 8u, 15u}) {
    const Landscape land = build_landscape(40 + k, 16, k, InteractionScheme::random);
    const auto init = random_config(rng, land.n);
    const auto sa = steepest_ascent(land, init, SearchBudget{1000}, true);
    Rng walk(7);
    const auto cs = centralized_search(land, init, SearchBudget{1000}, walk, true);
    for (const auto* out : {&sa, &cs}) {
      CHECK(out->best_config == out->final_config);
      CHECK(out->best_fitness == total_fitness(land, out->best_config));
      CHECK(out->best_fitness >= total_fitness(land, init));
      double last = total_fitness(land, init);
      for (const auto& row : out->trajectory)
        if (row.accepted) {
          CHECK(row.current_fitness > last);
          last = row.current_fitness;
        }
    }
    CHECK(sa.evaluations == std::uint64_t{land.n} * sa.steps_used);
    CHECK(cs.evaluations == cs.steps_used);
  }
}

TEST_CASE("parallel update follows the scripted L2 trace") {
  const Landscape land = l2();
  ScriptedStream stream;
  // gen 1: both nodes attempt, both solo flips improve -> (1,1)
  // gen 2: both attempt, nothing improves -> still generation -> scan -> stop
  stream.reals = {0.0, 0.0, 0.0, 0.0};
  const auto out = parallel_update(land, conf({0, 0}), SearchBudget{1000}, PuParams{0.9},
                                   stream, true);
  CHECK(out.final_config == conf({1, 1}));
  CHECK_THAT(out.best_fitness, Catch::Matchers::WithinAbs(0.60, 1e-15));
  CHECK(out.termination == Termination::local_stop);
  CHECK(out.steps_used == 2);
  CHECK(out.evaluations == 8);  // (2+1) + (2+1+2)
  REQUIRE(out.trajectory.size() == 2);
  CHECK(out.trajectory[0].proposal == "0+1");
  CHECK(out.trajectory[0].accepted);
}

TEST_CASE("parallel update never moves off a local optimum") {
  const Landscape land = l2();
  for (double tau : {0.1, 0.5, 0.9}) {
    Rng rng(17);
    const auto out = parallel_update(land, conf({1, 1}), SearchBudget{1000}, PuParams{tau}, rng);
    CHECK(out.termination == Termination::local_stop);
    CHECK(out.steps_used == 1);
    CHECK(out.final_config == conf({1, 1}));
  }
}

TEST_CASE("parallel update validates tau") {
  const Landscape land = l2();
  Rng rng(1);
  for (double tau : {0.0, 1.0, -0.5, 1.5})
    CHECK_THROWS_AS(parallel_update(land, conf({0, 0}), SearchBudget{10}, PuParams{tau}, rng),
                    std::invalid_argument);
}

TEST_CASE("parallel update accounting matches its trace") {
  const Landscape land = build_landscape(99, 14, 6, InteractionScheme::random);
  Rng init_rng(4);
  const auto init = random_config(init_rng, land.n);
  Rng walk(12);
  const auto out = parallel_update(land, init, SearchBudget{200}, PuParams{0.4}, walk, true);
  std::uint64_t expected = 0;
  for (const auto& row : out.trajectory) {
    if (row.proposal != "-")
      expected += 1 + std::count(row.proposal.begin(), row.proposal.end(), '+');
    expected += 1;                          // recorded generation fitness
    if (!row.accepted) expected += land.n;  // still generation -> full scan
  }
  CHECK(out.evaluations == expected);
  CHECK(out.best_fitness == total_fitness(land, out.best_config));
  CHECK(out.best_fitness >= total_fitness(land, init));
}

TEST_CASE("parallel update on n=1 degenerates to per-step proposals") {
  const Landscape land = build_landscape(3, 1, 0, InteractionScheme::random);
  Rng rng(9);
  Configuration init;
  init.bits = {land.tables[0][0] > land.tables[0][1] ? std::uint8_t{1} : std::uint8_t{0}};
  const auto out = parallel_update(land, init, SearchBudget{1000}, PuParams{0.5}, rng);
  CHECK(out.best_fitness == brute_force_optimum(land).global_max_fitness);
  CHECK(out.termination == Termination::local_stop);
}

TEST_CASE("parallel update sweep returns the max over the grid") {
  const Landscape land = build_landscape(1234, 16, 10, InteractionScheme::random);
  Rng init_rng(88);
  const auto init = random_config(init_rng, land.n);

  const std::vector<double> grid = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<Rng> streams, solo_streams;
  for (std::size_t t = 0; t < grid.size(); ++t) {
    streams.emplace_back(5000 + t);
    solo_streams.emplace_back(5000 + t);
  }
  const auto sweep = parallel_update_sweep(land, init, SearchBudget{200},
                                           std::span<const double>(grid),
                                           std::span<Rng>(streams));
  std::uint64_t evals = 0;
  for (std::size_t t = 0; t < grid.size(); ++t) {
    const auto solo = parallel_update(land, init, SearchBudget{200}, PuParams{grid[t]},
                                      solo_streams[t]);
    CHECK(sweep.best_fitness >= solo.best_fitness);
    evals += solo.evaluations;
  }
  CHECK(sweep.evaluations == evals);
  CHECK(sweep.best_fitness == total_fitness(land, sweep.best_config));
}

TEST_CASE("single-entry sweep equals a plain parallel update run") {
  const Landscape land = l2();
  const std::vector<double> grid = {0.9};
  std::vector<Rng> streams;
  streams.emplace_back(42);
  Rng solo(42);
  const auto sweep = parallel_update_sweep(land, conf({0, 0}), SearchBudget{100},
                                           std::span<const double>(grid),
                                           std::span<Rng>(streams));
  const auto run = parallel_update(land, conf({0, 0}), SearchBudget{100}, PuParams{0.9}, solo);
  CHECK(sweep.best_fitness == run.best_fitness);
  CHECK(sweep.final_config == run.final_config);
  CHECK(sweep.evaluations == run.evaluations);

  std::vector<Rng> none;
  CHECK_THROWS_AS(parallel_update_sweep(land, conf({0, 0}), SearchBudget{100},
                                        std::span<const double>{}, std::span<Rng>(none)),
                  std::invalid_argument);
}

TEST_CASE("replaying any algorithm reproduces the outcome exactly") {
  const Landscape land = build_landscape(321, 18, 9, InteractionScheme::random);
  Rng init_rng(55);
  const auto init = random_config(init_rng, land.n);
  for (int round = 0; round < 2; ++round) {
    Rng cs_rng(1), pu_rng(2);
    static SearchOutcome cs_first, pu_first;
    const auto cs = centralized_search(land, init, SearchBudget{500}, cs_rng);
    const auto pu = parallel_update(land, init, SearchBudget{500}, PuParams{0.3}, pu_rng);
    if (round == 0) {
      cs_first = cs;
      pu_first = pu;
    } else {
      CHECK(cs.best_config == cs_first.best_config);
      CHECK(cs.evaluations == cs_first.evaluations);
      CHECK(pu.best_config == pu_first.best_config);
      CHECK(pu.best_fitness == pu_first.best_fitness);
      CHECK(pu.evaluations == pu_first.evaluations);
    }
  }
}
