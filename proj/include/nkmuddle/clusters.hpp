#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkmuddle/evaluator.hpp"
#include "nkmuddle/landscape.hpp"
#include "nkmuddle/rng.hpp"
#include "nkmuddle/search.hpp"

namespace nkmuddle {

enum class PartitionMode { contiguous, seeded_random };

inline std::string to_string(PartitionMode m) {
  return m == PartitionMode::contiguous ? "contiguous" : "seeded_random";
}

// Whether the flipped node(s) count toward the acceptance aggregate.
enum class AcceptanceScope { comembers_excluding_focal, whole_cluster };

inline std::string to_string(AcceptanceScope s) {
  return s == AcceptanceScope::comembers_excluding_focal ? "comembers_excluding_focal"
                                                         : "whole_cluster";
}

struct ClusterPartition {
  std::vector<std::uint32_t> assignment;  // node -> cluster id in [0, cluster_count)
  std::uint32_t cluster_count = 0;
  std::vector<std::vector<std::uint32_t>> members;  // per cluster, ascending
};

// Validates an explicit assignment and derives the member lists.
inline ClusterPartition make_cluster_partition(std::vector<std::uint32_t> assignment,
                                               std::uint32_t cluster_count) {
  if (cluster_count < 2) throw std::invalid_argument("cluster_count must be >= 2");
  ClusterPartition p;
  p.cluster_count = cluster_count;
  p.members.assign(cluster_count, {});
  for (std::uint32_t node = 0; node < assignment.size(); ++node) {
    if (assignment[node] >= cluster_count)
      throw std::invalid_argument("cluster id out of range for node " + std::to_string(node));
    p.members[assignment[node]].push_back(node);
  }
  for (std::uint32_t c = 0; c < cluster_count; ++c)
    if (p.members[c].empty())
      throw std::invalid_argument("cluster " + std::to_string(c) + " is empty");
  p.assignment = std::move(assignment);
  return p;
}

namespace detail {

inline std::vector<std::uint32_t> cluster_sizes(std::uint32_t n, std::uint32_t cluster_count) {
  if (cluster_count < 2 || 2 * cluster_count > n)
    throw std::invalid_argument("cluster_count=" + std::to_string(cluster_count) +
                                " is outside [2, n/2] for n=" + std::to_string(n) +
                                " (every cluster needs >= 2 members)");
  // sizes differ by at most one, larger blocks first
  std::vector<std::uint32_t> sizes(cluster_count, n / cluster_count);
  for (std::uint32_t c = 0; c < n % cluster_count; ++c) ++sizes[c];
  return sizes;
}

}  // namespace detail

inline ClusterPartition build_cluster_partition(std::uint32_t n, std::uint32_t cluster_count,
                                                PartitionMode mode = PartitionMode::contiguous) {
  if (mode != PartitionMode::contiguous)
    throw std::invalid_argument("seeded_random partition requires an rng stream");
  const auto sizes = detail::cluster_sizes(n, cluster_count);
  std::vector<std::uint32_t> assignment(n);
  std::uint32_t node = 0;
  for (std::uint32_t c = 0; c < cluster_count; ++c)
    for (std::uint32_t i = 0; i < sizes[c]; ++i) assignment[node++] = c;
  return make_cluster_partition(std::move(assignment), cluster_count);
}

template <RandomStream R>
ClusterPartition build_cluster_partition(std::uint32_t n, std::uint32_t cluster_count,
                                         PartitionMode mode, R& rng) {
  if (mode == PartitionMode::contiguous)
    return build_cluster_partition(n, cluster_count, mode);
  const auto sizes = detail::cluster_sizes(n, cluster_count);
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::uint32_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::uint32_t>(rng.uniform_below(i + 1));
    std::swap(perm[i], perm[j]);
  }
  std::vector<std::uint32_t> assignment(n);
  std::uint32_t at = 0;
  for (std::uint32_t c = 0; c < cluster_count; ++c)
    for (std::uint32_t i = 0; i < sizes[c]; ++i) assignment[perm[at++]] = c;
  return make_cluster_partition(std::move(assignment), cluster_count);
}

// Sum of fitness contributions over the focal cluster's members; the focal
// nodes themselves are excluded unless scope says otherwise.
inline double cluster_comember_aggregate(
    const Landscape& land, const Configuration& config, const ClusterPartition& partition,
    std::span<const std::uint32_t> focal_nodes,
    AcceptanceScope scope = AcceptanceScope::comembers_excluding_focal) {
  if (partition.assignment.size() != land.n)
    throw std::invalid_argument("partition size does not match landscape n");
  if (focal_nodes.empty()) throw std::invalid_argument("focal set must be non-empty");
  for (std::uint32_t f : focal_nodes) {
    if (f >= land.n) throw std::out_of_range("focal node out of range");
    if (partition.assignment[f] != partition.assignment[focal_nodes[0]])
      throw std::invalid_argument("focal nodes span more than one cluster");
  }
  const auto& members = partition.members[partition.assignment[focal_nodes[0]]];
  double sum = 0.0;
  for (std::uint32_t m : members) {
    if (scope == AcceptanceScope::comembers_excluding_focal &&
        std::find(focal_nodes.begin(), focal_nodes.end(), m) != focal_nodes.end())
      continue;
    sum += node_contribution(land, config, m);
  }
  return sum;
}

struct MtParams {
  ClusterPartition partition;
  int max_changes_per_move = 1;  // 1 = MT1, 2 = MT2
  AcceptanceScope scope = AcceptanceScope::comembers_excluding_focal;
};

// Muddling through. Candidates are single flips (MT1) plus same-cluster
// pair flips (MT2); each proposal is drawn uniformly from the untried set
// and accepted iff the focal cluster's co-member contribution sum strictly
// rises. Acceptance ignores total fitness, so the walk can descend; the
// highest-fitness configuration seen anywhere on the path is the result.
template <RandomStream R>
SearchOutcome muddling_through(const Landscape& land, const Configuration& init,
                               SearchBudget budget, const MtParams& mt, R& rng,
                               bool capture_trace = false) {
  detail::check_budget(budget);
  const ClusterPartition& partition = mt.partition;
  if (partition.assignment.size() != land.n)
    throw std::invalid_argument("partition size does not match landscape n");
  if (mt.max_changes_per_move != 1 && mt.max_changes_per_move != 2)
    throw std::invalid_argument("max_changes_per_move must be 1 or 2");
  if (mt.scope == AcceptanceScope::comembers_excluding_focal)
    for (const auto& members : partition.members)
      if (members.size() < 2)
        throw std::invalid_argument(
            "exclude-focal acceptance requires every cluster to have >= 2 members");

  struct Move {
    std::uint32_t a, b;  // b == a for singles
    std::uint32_t cluster;
  };
  std::vector<Move> candidates;
  for (std::uint32_t i = 0; i < land.n; ++i)
    candidates.push_back({i, i, partition.assignment[i]});
  if (mt.max_changes_per_move == 2)
    for (std::uint32_t c = 0; c < partition.cluster_count; ++c) {
      const auto& members = partition.members[c];
      for (std::size_t x = 0; x < members.size(); ++x)
        for (std::size_t y = x + 1; y < members.size(); ++y)
          candidates.push_back({members[x], members[y], c});
    }

  Evaluator ev(land, init);
  detail::BestTracker best(init, ev.fitness());
  SearchOutcome out;
  auto* rows = capture_trace ? &out.trajectory : nullptr;

  std::vector<std::uint32_t> untried(candidates.size());
  std::iota(untried.begin(), untried.end(), 0);

  while (out.steps_used < budget.max_steps) {
    ++out.steps_used;
    const auto pick = static_cast<std::size_t>(rng.uniform_below(untried.size()));
    const Move move = candidates[untried[pick]];
    untried[pick] = untried.back();
    untried.pop_back();

    std::uint32_t flips[2] = {move.a, move.b};
    const std::span<const std::uint32_t> flip_span(flips, move.a == move.b ? 1u : 2u);
    const auto& members = partition.members[move.cluster];
    const std::span<const std::uint32_t> excluded =
        mt.scope == AcceptanceScope::comembers_excluding_focal
            ? flip_span
            : std::span<const std::uint32_t>{};

    const double before = ev.comember_sum(members, excluded);
    const double after = ev.candidate_comember_sum(members, excluded, flip_span);
    ++out.evaluations;

    const bool accepted = after > before;
    if (accepted) {
      ev.apply(flip_span);
      best.offer(ev.config(), ev.fitness());
      untried.resize(candidates.size());
      std::iota(untried.begin(), untried.end(), 0);
    }
    if (rows) {
      std::string proposal = std::to_string(move.a);
      if (move.b != move.a) proposal += "+" + std::to_string(move.b);
      detail::trace(rows, out.steps_used, std::move(proposal), accepted, ev.fitness(),
                    best.fitness);
    }
    if (untried.empty()) {
      out.termination = Termination::local_stop;
      break;
    }
  }

  detail::finish(out, init, best, ev.config());
  return out;
}

}  // namespace nkmuddle
