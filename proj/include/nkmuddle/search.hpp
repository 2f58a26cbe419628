#pragma once

#include <cassert>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkmuddle/evaluator.hpp"
#include "nkmuddle/landscape.hpp"
#include "nkmuddle/rng.hpp"

namespace nkmuddle {

struct SearchBudget {
  std::uint32_t max_steps = 1000;
};

enum class Termination { budget_exhausted, local_stop };

inline std::string to_string(Termination t) {
  return t == Termination::local_stop ? "local_stop" : "budget_exhausted";
}

struct TraceRow {
  std::uint32_t step;
  std::string proposal;
  bool accepted;
  double current_fitness;
  double best_fitness;
};

struct SearchOutcome {
  Configuration best_config;
  double best_fitness = 0.0;
  Configuration final_config;
  std::uint32_t steps_used = 0;
  std::uint64_t evaluations = 0;
  std::uint32_t hamming_init_to_best = 0;
  Termination termination = Termination::budget_exhausted;
  std::vector<TraceRow> trajectory;  // filled only when tracing is on
};

// Per-node flip-attempt probability for parallel updating.
struct PuParams {
  double tau = 0.5;
};

inline std::vector<double> default_tau_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  return grid;
}

namespace detail {

struct BestTracker {
  Configuration config;
  double fitness;

  BestTracker(const Configuration& c, double f) : config(c), fitness(f) {}

  // Strictly-better keeps the earliest best on ties.
  void offer(const Configuration& c, double f) {
    if (f > fitness) {
      fitness = f;
      config = c;
    }
  }
};

inline void check_budget(const SearchBudget& budget) {
  if (budget.max_steps == 0) throw std::invalid_argument("budget requires max_steps >= 1");
}

inline void finish(SearchOutcome& out, const Configuration& init, const BestTracker& best,
                   const Configuration& final_config) {
  out.best_config = best.config;
  out.best_fitness = best.fitness;
  out.final_config = final_config;
  out.hamming_init_to_best = hamming_distance(init, out.best_config);
}

inline void trace(std::vector<TraceRow>* rows, std::uint32_t step, std::string proposal,
                  bool accepted, double current, double best) {
  if (rows) rows->push_back({step, std::move(proposal), accepted, current, best});
}

}  // namespace detail

// Each bit independently Bernoulli(1/2) from the given stream.
template <RandomStream R>
Configuration random_initial_config(R& rng, std::uint32_t n) {
  Configuration c;
  c.bits.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) c.bits.push_back(rng.bernoulli(0.5) ? 1 : 0);
  return c;
}

// Evaluate all n hamming-one neighbors per step, move to the strictly best
// one (ties broken by lowest node index); stop when none improves.
inline SearchOutcome steepest_ascent(const Landscape& land, const Configuration& init,
                                     SearchBudget budget, bool capture_trace = false) {
  detail::check_budget(budget);
  Evaluator ev(land, init);
  detail::BestTracker best(init, ev.fitness());
  SearchOutcome out;
  auto* rows = capture_trace ? &out.trajectory : nullptr;

  while (out.steps_used < budget.max_steps) {
    ++out.steps_used;
    const double current = ev.fitness();
    double best_neighbor = current;
    std::int64_t best_node = -1;
    for (std::uint32_t i = 0; i < land.n; ++i) {
      const double f = ev.candidate_fitness(i);
      ++out.evaluations;
      if (f > best_neighbor) {
        best_neighbor = f;
        best_node = i;
      }
    }
    if (best_node < 0) {
      detail::trace(rows, out.steps_used, "-", false, current, best.fitness);
      out.termination = Termination::local_stop;
      break;
    }
    ev.apply(static_cast<std::uint32_t>(best_node));
    best.offer(ev.config(), ev.fitness());
    detail::trace(rows, out.steps_used, std::to_string(best_node), true, ev.fitness(),
                  best.fitness);
  }

  detail::finish(out, init, best, ev.config());
  assert(out.best_config == out.final_config);  // SA is monotone
  return out;
}

// Propose one untried single flip uniformly per step; accept iff it strictly
// improves total fitness. The untried set refills on every accepted move;
// exhausting it proves the configuration is a local optimum.
template <RandomStream R>
SearchOutcome centralized_search(const Landscape& land, const Configuration& init,
                                 SearchBudget budget, R& rng, bool capture_trace = false) {
  detail::check_budget(budget);
  Evaluator ev(land, init);
  detail::BestTracker best(init, ev.fitness());
  SearchOutcome out;
  auto* rows = capture_trace ? &out.trajectory : nullptr;

  std::vector<std::uint32_t> untried(land.n);
  std::iota(untried.begin(), untried.end(), 0);

  while (out.steps_used < budget.max_steps) {
    ++out.steps_used;
    const auto pick = static_cast<std::size_t>(rng.uniform_below(untried.size()));
    const std::uint32_t node = untried[pick];
    untried[pick] = untried.back();
    untried.pop_back();

    const double f = ev.candidate_fitness(node);
    ++out.evaluations;
    const bool accepted = f > ev.fitness();
    if (accepted) {
      ev.apply(node);
      best.offer(ev.config(), ev.fitness());
      untried.resize(land.n);
      std::iota(untried.begin(), untried.end(), 0);
    }
    detail::trace(rows, out.steps_used, std::to_string(node), accepted, ev.fitness(),
                  best.fitness);
    if (untried.empty()) {
      out.termination = Termination::local_stop;
      break;
    }
  }

  detail::finish(out, init, best, ev.config());
  assert(out.best_config == out.final_config);  // CS is monotone
  return out;
}

// One generation per step: every node attempts to flip with probability tau,
// the attempts whose solo flip strictly improves fitness all flip at once.
// Simultaneous flips can lower fitness, so the best configuration seen along
// the path is tracked separately.
template <RandomStream R>
SearchOutcome parallel_update(const Landscape& land, const Configuration& init,
                              SearchBudget budget, PuParams pu, R& rng,
                              bool capture_trace = false) {
  detail::check_budget(budget);
  if (!(pu.tau > 0.0 && pu.tau < 1.0))
    throw std::invalid_argument("parallel update requires 0 < tau < 1");
  Evaluator ev(land, init);
  detail::BestTracker best(init, ev.fitness());
  SearchOutcome out;
  auto* rows = capture_trace ? &out.trajectory : nullptr;

  std::vector<std::uint32_t> attempts, flips;
  while (out.steps_used < budget.max_steps) {
    ++out.steps_used;
    attempts.clear();
    for (std::uint32_t i = 0; i < land.n; ++i)
      if (rng.bernoulli(pu.tau)) attempts.push_back(i);

    const double current = ev.fitness();
    flips.clear();
    for (std::uint32_t i : attempts) {
      const double f = ev.candidate_fitness(i);
      ++out.evaluations;
      if (f > current) flips.push_back(i);
    }
    if (!flips.empty()) ev.apply(std::span<const std::uint32_t>(flips));
    ++out.evaluations;  // the new configuration's fitness is recorded
    best.offer(ev.config(), ev.fitness());

    if (rows) {
      std::string proposal;
      for (std::uint32_t i : attempts) {
        if (!proposal.empty()) proposal.push_back('+');
        proposal += std::to_string(i);
      }
      detail::trace(rows, out.steps_used, proposal.empty() ? "-" : proposal, !flips.empty(),
                    ev.fitness(), best.fitness);
    }

    if (flips.empty()) {
      // a still generation: full solo scan decides whether any move is left
      bool any_improving = false;
      for (std::uint32_t i = 0; i < land.n; ++i) {
        const double f = ev.candidate_fitness(i);
        if (f > current) any_improving = true;
      }
      out.evaluations += land.n;
      if (!any_improving) {
        out.termination = Termination::local_stop;
        break;
      }
    }
  }

  detail::finish(out, init, best, ev.config());
  return out;
}

// Run parallel_update once per tau with its own stream; keep the outcome
// with the highest best fitness (first grid entry wins ties). Evaluations
// and steps accumulate over all runs.
template <RandomStream R>
SearchOutcome parallel_update_sweep(const Landscape& land, const Configuration& init,
                                    SearchBudget budget, std::span<const double> tau_grid,
                                    std::span<R> streams, bool capture_trace = false) {
  if (tau_grid.empty()) throw std::invalid_argument("tau grid must be non-empty");
  if (streams.size() != tau_grid.size())
    throw std::invalid_argument("tau grid and stream count must match");

  SearchOutcome out;
  std::uint64_t evaluations = 0;
  std::uint32_t steps = 0;
  bool first = true;
  for (std::size_t t = 0; t < tau_grid.size(); ++t) {
    SearchOutcome run =
        parallel_update(land, init, budget, PuParams{tau_grid[t]}, streams[t], capture_trace);
    evaluations += run.evaluations;
    steps += run.steps_used;
    if (capture_trace) {
      char label[32];
      std::snprintf(label, sizeof label, "tau=%g:", tau_grid[t]);
      for (auto& row : run.trajectory) row.proposal.insert(0, label);
    }
    if (first || run.best_fitness > out.best_fitness) {
      auto trajectory = std::move(out.trajectory);
      out = std::move(run);
      if (capture_trace) {
        trajectory.insert(trajectory.end(), out.trajectory.begin(), out.trajectory.end());
        out.trajectory = std::move(trajectory);
      }
      first = false;
    } else if (capture_trace) {
      out.trajectory.insert(out.trajectory.end(), run.trajectory.begin(), run.trajectory.end());
    }
  }
  out.evaluations = evaluations;
  out.steps_used = steps;
  return out;
}

}  // namespace nkmuddle
