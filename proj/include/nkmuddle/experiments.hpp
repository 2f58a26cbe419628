#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "nkmuddle/clusters.hpp"
#include "nkmuddle/landscape.hpp"
#include "nkmuddle/oracle.hpp"
#include "nkmuddle/rng.hpp"
#include "nkmuddle/search.hpp"

namespace nkmuddle {

enum class AlgorithmKind { steepest_ascent, centralized_search, parallel_update, muddling_through };

// One algorithm column of an experiment. `id` is the descriptor exactly as
// written ("sa", "pu:0.1,0.5", "mt:4:1", ...) and is echoed verbatim into
// every output file.
struct AlgorithmDescriptor {
  AlgorithmKind kind = AlgorithmKind::steepest_ascent;
  std::string id;
  std::vector<double> tau_grid;                                        // pu
  std::uint32_t clusters = 0;                                          // mt
  int max_changes = 1;                                                 // mt
  AcceptanceScope scope = AcceptanceScope::comembers_excluding_focal;  // mt
  PartitionMode partition_mode = PartitionMode::contiguous;            // mt

  bool operator==(const AlgorithmDescriptor&) const = default;
};

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i)
    if (i == text.size() || text[i] == sep) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  return out;
}

inline double parse_probability(const std::string& token, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": '" + token + "' is not a number");
  }
  if (used != token.size())
    throw std::invalid_argument(what + ": '" + token + "' is not a number");
  if (!(v > 0.0 && v < 1.0))
    throw std::invalid_argument(what + ": " + token + " is outside (0,1)");
  return v;
}

inline std::uint64_t parse_uint(const std::string& token, const std::string& what) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument(what + ": '" + token + "' is not a non-negative integer");
  return std::stoull(token);
}

}  // namespace detail

// Descriptor mini-syntax: "sa", "cs", "pu[:tau,tau,...]",
// "mt:<clusters>:<max_changes>[:excl|whole][:contiguous|seeded_random]".
inline AlgorithmDescriptor parse_algorithm(const std::string& text) {
  const auto tokens = detail::split(text, ':');
  AlgorithmDescriptor alg;
  alg.id = text;
  const std::string& head = tokens[0];

  if (head == "sa" || head == "cs") {
    if (tokens.size() != 1)
      throw std::invalid_argument("algorithm '" + text + "': '" + head +
                                  "' takes no parameters");
    alg.kind = head == "sa" ? AlgorithmKind::steepest_ascent
                            : AlgorithmKind::centralized_search;
    return alg;
  }

  if (head == "pu") {
    alg.kind = AlgorithmKind::parallel_update;
    if (tokens.size() == 1) {
      alg.tau_grid = default_tau_grid();
    } else if (tokens.size() == 2) {
      for (const auto& t : detail::split(tokens[1], ','))
        alg.tau_grid.push_back(detail::parse_probability(t, "algorithm '" + text + "' tau"));
    } else {
      throw std::invalid_argument("algorithm '" + text + "': expected pu[:tau,tau,...]");
    }
    return alg;
  }

  if (head == "mt") {
    alg.kind = AlgorithmKind::muddling_through;
    if (tokens.size() < 3)
      throw std::invalid_argument("algorithm '" + text +
                                  "': expected mt:<clusters>:<max_changes>");
    alg.clusters = static_cast<std::uint32_t>(
        detail::parse_uint(tokens[1], "algorithm '" + text + "' clusters"));
    const auto changes = detail::parse_uint(tokens[2], "algorithm '" + text + "' max_changes");
    if (changes != 1 && changes != 2)
      throw std::invalid_argument("algorithm '" + text + "': max_changes must be 1 or 2");
    alg.max_changes = static_cast<int>(changes);
    for (std::size_t i = 3; i < tokens.size(); ++i) {
      const std::string& t = tokens[i];
      if (t == "excl" || t == "comembers_excluding_focal")
        alg.scope = AcceptanceScope::comembers_excluding_focal;
      else if (t == "whole" || t == "whole_cluster")
        alg.scope = AcceptanceScope::whole_cluster;
      else if (t == "contiguous")
        alg.partition_mode = PartitionMode::contiguous;
      else if (t == "seeded_random")
        alg.partition_mode = PartitionMode::seeded_random;
      else
        throw std::invalid_argument("algorithm '" + text + "': unknown option '" + t + "'");
    }
    return alg;
  }

  throw std::invalid_argument("unknown algorithm '" + text +
                              "' (expected sa, cs, pu or mt)");
}

struct ExperimentSpec {
  std::uint32_t n = 20;
  std::vector<std::uint32_t> k_values;
  std::vector<AlgorithmDescriptor> algorithms;
  std::uint32_t replications = 500;
  SearchBudget budget{1000};
  std::uint64_t master_seed = 0;
  InteractionScheme scheme = InteractionScheme::random;

  bool operator==(const ExperimentSpec&) const = default;
};

inline void validate_spec(const ExperimentSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("n must be >= 1");
  if (spec.k_values.empty()) throw std::invalid_argument("k_values must be non-empty");
  for (std::size_t i = 0; i < spec.k_values.size(); ++i)
    if (spec.k_values[i] > spec.n - 1)
      throw std::invalid_argument("k_values[" + std::to_string(i) +
                                  "]=" + std::to_string(spec.k_values[i]) +
                                  " violates k <= n-1 (n=" + std::to_string(spec.n) + ")");
  if (spec.algorithms.empty()) throw std::invalid_argument("algorithms must be non-empty");
  if (spec.replications == 0) throw std::invalid_argument("replications must be >= 1");
  if (spec.budget.max_steps == 0) throw std::invalid_argument("budget must be >= 1");
  for (std::size_t i = 0; i < spec.algorithms.size(); ++i) {
    const auto& alg = spec.algorithms[i];
    for (std::size_t j = 0; j < i; ++j)
      if (spec.algorithms[j].id == alg.id)
        throw std::invalid_argument("algorithms[" + std::to_string(i) + "] duplicates '" +
                                    alg.id + "'");
    if (alg.kind == AlgorithmKind::muddling_through) {
      try {
        detail::cluster_sizes(spec.n, alg.clusters);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("algorithms[" + std::to_string(i) + "] '" + alg.id +
                                    "': " + e.what());
      }
    }
    if (alg.kind == AlgorithmKind::parallel_update && alg.tau_grid.empty())
      throw std::invalid_argument("algorithms[" + std::to_string(i) + "] '" + alg.id +
                                  "': tau grid must be non-empty");
  }
}

// ---- deterministic stream derivation -------------------------------------

enum class StreamPurpose : std::uint64_t {
  landscape = 0x4c414e44,
  init = 0x494e4954,
  proposal = 0x50524f50,
  partition = 0x50415254,
};

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Hash-based domain separation over the run coordinates. Landscape and init
// streams take algorithm_tag = 0, so every algorithm in a replication sees
// the same instance and the same starting point.
inline std::uint64_t derive_seed(std::uint64_t master_seed, StreamPurpose purpose,
                                 std::uint64_t replication, std::uint64_t k,
                                 std::uint64_t algorithm_tag = 0, std::uint64_t salt = 0) {
  std::uint64_t h = mix64(master_seed ^ 0x6e6b2d6d7564646cull);
  h = mix64(h ^ static_cast<std::uint64_t>(purpose));
  h = mix64(h ^ replication);
  h = mix64(h ^ k);
  h = mix64(h ^ algorithm_tag);
  h = mix64(h ^ salt);
  return h;
}

// ---- replication and experiment execution --------------------------------

struct ReplicationRecord {
  std::uint32_t replication = 0;
  std::uint32_t k = 0;
  std::string algorithm;
  std::uint64_t landscape_seed = 0;
  double best_fitness = 0.0;
  std::uint32_t hamming = 0;
  std::uint64_t evaluations = 0;
  std::uint32_t steps = 0;
  Termination termination = Termination::budget_exhausted;
  // best_fitness / oracle global max; NaN unless normalization was requested
  double norm_fitness = std::numeric_limits<double>::quiet_NaN();
};

struct OracleRow {
  std::uint32_t replication = 0;
  std::uint32_t k = 0;
  std::uint64_t landscape_seed = 0;
  double global_max_fitness = 0.0;
  std::uint64_t local_optima_count = 0;
  std::string global_max_config;
};

struct TraceBundle {
  std::uint32_t replication = 0;
  std::uint32_t k = 0;
  std::string algorithm;
  std::vector<TraceRow> rows;
};

struct AggregateRow {
  std::uint32_t k = 0;
  std::string algorithm;
  std::uint64_t count = 0;
  double mean_fitness = 0.0, se_fitness = 0.0;
  double mean_hamming = 0.0, se_hamming = 0.0;
  double mean_evaluations = 0.0, se_evaluations = 0.0;
  bool has_norm = false;
  double mean_norm_fitness = 0.0, se_norm_fitness = 0.0;
};

struct RunOptions {
  bool normalize = false;
  bool capture_trace = false;
};

inline SearchOutcome run_algorithm(const Landscape& land, const Configuration& init,
                                   SearchBudget budget, const AlgorithmDescriptor& alg,
                                   std::uint64_t master_seed, std::uint32_t replication,
                                   std::uint32_t k, bool capture_trace = false) {
  const std::uint64_t tag = fnv1a64(alg.id);
  switch (alg.kind) {
    case AlgorithmKind::steepest_ascent:
      return steepest_ascent(land, init, budget, capture_trace);
    case AlgorithmKind::centralized_search: {
      Rng rng(derive_seed(master_seed, StreamPurpose::proposal, replication, k, tag));
      return centralized_search(land, init, budget, rng, capture_trace);
    }
    case AlgorithmKind::parallel_update: {
      std::vector<Rng> streams;
      streams.reserve(alg.tau_grid.size());
      for (std::size_t t = 0; t < alg.tau_grid.size(); ++t)
        streams.emplace_back(
            derive_seed(master_seed, StreamPurpose::proposal, replication, k, tag, t));
      return parallel_update_sweep(land, init, budget,
                                   std::span<const double>(alg.tau_grid),
                                   std::span<Rng>(streams), capture_trace);
    }
    case AlgorithmKind::muddling_through: {
      ClusterPartition partition;
      if (alg.partition_mode == PartitionMode::contiguous) {
        partition = build_cluster_partition(land.n, alg.clusters);
      } else {
        Rng prng(derive_seed(master_seed, StreamPurpose::partition, replication, k, tag));
        partition =
            build_cluster_partition(land.n, alg.clusters, PartitionMode::seeded_random, prng);
      }
      MtParams mt{std::move(partition), alg.max_changes, alg.scope};
      Rng rng(derive_seed(master_seed, StreamPurpose::proposal, replication, k, tag));
      return muddling_through(land, init, budget, mt, rng, capture_trace);
    }
  }
  throw std::logic_error("unreachable algorithm kind");
}

struct ReplicationResult {
  std::vector<ReplicationRecord> records;  // one per algorithm, in spec order
  std::optional<OracleRow> oracle;
  std::vector<TraceBundle> traces;
};

// One landscape and one shared initial configuration per (replication, k);
// every algorithm runs on that same pair.
inline ReplicationResult run_replication(const ExperimentSpec& spec, std::uint32_t replication,
                                         std::uint32_t k, const RunOptions& options = {}) {
  const std::uint64_t landscape_seed =
      derive_seed(spec.master_seed, StreamPurpose::landscape, replication, k);
  const Landscape land = build_landscape(landscape_seed, spec.n, k, spec.scheme);
  Rng init_rng(derive_seed(spec.master_seed, StreamPurpose::init, replication, k));
  const Configuration init = random_initial_config(init_rng, spec.n);

  ReplicationResult result;
  double global_max = std::numeric_limits<double>::quiet_NaN();
  if (options.normalize) {
    const OracleReport report = brute_force_optimum(land);
    global_max = report.global_max_fitness;
    result.oracle =
        OracleRow{replication, k, landscape_seed, report.global_max_fitness,
                  report.local_optima_count, config_to_string(report.global_max_config)};
  }

  for (const auto& alg : spec.algorithms) {
    SearchOutcome out;
    try {
      out = run_algorithm(land, init, spec.budget, alg, spec.master_seed, replication, k,
                          options.capture_trace);
    } catch (const std::exception& e) {
      throw std::runtime_error("replication " + std::to_string(replication) + ", k=" +
                               std::to_string(k) + ", algorithm '" + alg.id + "': " + e.what());
    }
    ReplicationRecord rec;
    rec.replication = replication;
    rec.k = k;
    rec.algorithm = alg.id;
    rec.landscape_seed = landscape_seed;
    rec.best_fitness = out.best_fitness;
    rec.hamming = out.hamming_init_to_best;
    rec.evaluations = out.evaluations;
    rec.steps = out.steps_used;
    rec.termination = out.termination;
    if (options.normalize) rec.norm_fitness = out.best_fitness / global_max;
    result.records.push_back(std::move(rec));
    if (options.capture_trace)
      result.traces.push_back({replication, k, alg.id, std::move(out.trajectory)});
  }
  return result;
}

namespace detail {

struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double se = 0.0;
};

// Two-pass mean / standard error (sample sd over sqrt(count)).
template <class Select>
Moments moments(const std::vector<const ReplicationRecord*>& records, Select select) {
  Moments m;
  m.count = records.size();
  if (m.count == 0) return m;
  double sum = 0.0;
  for (const auto* r : records) sum += select(*r);
  m.mean = sum / static_cast<double>(m.count);
  if (m.count < 2) return m;
  double ss = 0.0;
  for (const auto* r : records) {
    const double d = select(*r) - m.mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(m.count - 1));
  m.se = sd / std::sqrt(static_cast<double>(m.count));
  return m;
}

}  // namespace detail

inline std::vector<AggregateRow> aggregate_records(const ExperimentSpec& spec,
                                                   const std::vector<ReplicationRecord>& records) {
  std::vector<AggregateRow> rows;
  for (std::uint32_t k : spec.k_values)
    for (const auto& alg : spec.algorithms) {
      std::vector<const ReplicationRecord*> group;
      for (const auto& rec : records)
        if (rec.k == k && rec.algorithm == alg.id) group.push_back(&rec);
      AggregateRow row;
      row.k = k;
      row.algorithm = alg.id;
      row.count = group.size();
      const auto fit = detail::moments(group, [](const auto& r) { return r.best_fitness; });
      const auto ham = detail::moments(group, [](const auto& r) { return double(r.hamming); });
      const auto ev = detail::moments(group, [](const auto& r) { return double(r.evaluations); });
      row.mean_fitness = fit.mean;
      row.se_fitness = fit.se;
      row.mean_hamming = ham.mean;
      row.se_hamming = ham.se;
      row.mean_evaluations = ev.mean;
      row.se_evaluations = ev.se;
      const bool has_norm =
          !group.empty() && !std::isnan(group.front()->norm_fitness);
      if (has_norm) {
        const auto norm = detail::moments(group, [](const auto& r) { return r.norm_fitness; });
        row.has_norm = true;
        row.mean_norm_fitness = norm.mean;
        row.se_norm_fitness = norm.se;
      }
      rows.push_back(std::move(row));
    }
  return rows;
}

struct ExperimentResult {
  std::vector<ReplicationRecord> records;  // ordered by (k, algorithm, replication)
  std::vector<AggregateRow> aggregates;
  std::vector<OracleRow> oracle_rows;
  std::vector<TraceBundle> traces;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Replications are independent; cells (k, replication) are distributed over
// a worker pool and the results are assembled in a fixed order, so the
// output is identical for any worker count.
inline ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned worker_count = 1,
                                       const RunOptions& options = {},
                                       const ProgressFn& progress = {}) {
  validate_spec(spec);
  const std::size_t cells = spec.k_values.size() * std::size_t{spec.replications};
  std::vector<ReplicationResult> slots(cells);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto work = [&] {
    for (;;) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= cells) return;
      {
        std::scoped_lock lock(error_mutex);
        if (error) return;
      }
      const std::uint32_t k = spec.k_values[cell / spec.replications];
      const auto replication = static_cast<std::uint32_t>(cell % spec.replications);
      try {
        slots[cell] = run_replication(spec, replication, k, options);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        std::scoped_lock lock(error_mutex);
        progress(finished, cells);
      }
    }
  };

  if (worker_count <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < worker_count; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  ExperimentResult result;
  // records ordered by (k, algorithm, replication)
  for (std::size_t ki = 0; ki < spec.k_values.size(); ++ki)
    for (std::size_t a = 0; a < spec.algorithms.size(); ++a)
      for (std::uint32_t rep = 0; rep < spec.replications; ++rep)
        result.records.push_back(slots[ki * spec.replications + rep].records[a]);
  for (std::size_t ki = 0; ki < spec.k_values.size(); ++ki)
    for (std::uint32_t rep = 0; rep < spec.replications; ++rep) {
      auto& slot = slots[ki * spec.replications + rep];
      if (slot.oracle) result.oracle_rows.push_back(*slot.oracle);
      for (auto& bundle : slot.traces) result.traces.push_back(std::move(bundle));
    }
  result.aggregates = aggregate_records(spec, result.records);
  return result;
}

}  // namespace nkmuddle
