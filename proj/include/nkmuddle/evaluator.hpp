#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nkmuddle/landscape.hpp"

namespace nkmuddle {

// Incremental evaluation state around a current configuration. Lookup rows
// are maintained as integers, so every contribution is an exact fitness
// matrix entry; totals are summed in ascending node order, which makes the
// incremental path agree bit-for-bit with total_fitness().
class Evaluator {
 public:
  Evaluator(const Landscape& land, Configuration init) : land_(&land) {
    reset(std::move(init));
  }

  void reset(Configuration config) {
    if (config.size() != land_->n)
      throw std::invalid_argument("configuration length does not match landscape n");
    config_ = std::move(config);
    rows_.resize(land_->n);
    contrib_.resize(land_->n);
    for (std::uint32_t i = 0; i < land_->n; ++i) {
      rows_[i] = contribution_row_index(*land_, config_, i);
      contrib_[i] = land_->tables[i][rows_[i]];
    }
    fitness_ = profile_mean(contrib_);
  }

  const Landscape& landscape() const { return *land_; }
  const Configuration& config() const { return config_; }
  double fitness() const { return fitness_; }
  std::span<const double> contributions() const { return contrib_; }

  // Total fitness the configuration would have after flipping `flips`
  // (distinct nodes), without committing anything.
  double candidate_fitness(std::span<const std::uint32_t> flips) {
    collect(flips);
    double sum = 0.0;
    std::size_t a = 0;
    for (std::uint32_t j = 0; j < land_->n; ++j) {
      if (a < affected_.size() && affected_[a] == j)
        sum += affected_contrib_[a++];
      else
        sum += contrib_[j];
    }
    return sum / static_cast<double>(land_->n);
  }

  double candidate_fitness(std::uint32_t flip) {
    const std::uint32_t one[1] = {flip};
    return candidate_fitness(std::span<const std::uint32_t>(one));
  }

  // Sum of current contributions over members \ excluded, ascending order.
  double comember_sum(std::span<const std::uint32_t> members,
                      std::span<const std::uint32_t> excluded) const {
    double sum = 0.0;
    for (std::uint32_t m : members)
      if (!contains(excluded, m)) sum += contrib_[m];
    return sum;
  }

  // The same sum as it would be after flipping `flips`, without committing.
  double candidate_comember_sum(std::span<const std::uint32_t> members,
                                std::span<const std::uint32_t> excluded,
                                std::span<const std::uint32_t> flips) {
    collect(flips);
    double sum = 0.0;
    std::size_t a = 0;
    for (std::uint32_t m : members) {
      while (a < affected_.size() && affected_[a] < m) ++a;
      if (contains(excluded, m)) continue;
      if (a < affected_.size() && affected_[a] == m)
        sum += affected_contrib_[a];
      else
        sum += contrib_[m];
    }
    return sum;
  }

  void apply(std::span<const std::uint32_t> flips) {
    for (std::uint32_t f : flips) {
      if (f >= land_->n) throw std::out_of_range("node index out of range");
      const bool rising = config_.bits[f] == 0;
      config_.bits[f] ^= 1;
      for (const auto& shift : land_->influence[f]) {
        rows_[shift.node] = rising ? rows_[shift.node] + shift.weight
                                   : rows_[shift.node] - shift.weight;
        contrib_[shift.node] = land_->tables[shift.node][rows_[shift.node]];
      }
    }
    fitness_ = profile_mean(contrib_);
  }

  void apply(std::uint32_t flip) {
    const std::uint32_t one[1] = {flip};
    apply(std::span<const std::uint32_t>(one));
  }

 private:
  static bool contains(std::span<const std::uint32_t> xs, std::uint32_t v) {
    for (std::uint32_t x : xs)
      if (x == v) return true;
    return false;
  }

  // Fill affected_ (ascending) and affected_contrib_ with the contributions
  // that change when `flips` are toggled from the current configuration.
  void collect(std::span<const std::uint32_t> flips) {
    shifts_.clear();
    for (std::uint32_t f : flips) {
      if (f >= land_->n) throw std::out_of_range("node index out of range");
      const bool rising = config_.bits[f] == 0;
      for (const auto& shift : land_->influence[f])
        shifts_.emplace_back(shift.node,
                             rising ? static_cast<std::int64_t>(shift.weight)
                                    : -static_cast<std::int64_t>(shift.weight));
    }
    std::sort(shifts_.begin(), shifts_.end());
    affected_.clear();
    affected_contrib_.clear();
    for (std::size_t i = 0; i < shifts_.size();) {
      const std::uint32_t node = shifts_[i].first;
      std::int64_t delta = 0;
      for (; i < shifts_.size() && shifts_[i].first == node; ++i) delta += shifts_[i].second;
      const std::uint64_t row = rows_[node] + static_cast<std::uint64_t>(delta);
      affected_.push_back(node);
      affected_contrib_.push_back(land_->tables[node][row]);
    }
  }

  const Landscape* land_;
  Configuration config_;
  std::vector<std::uint64_t> rows_;
  std::vector<double> contrib_;
  double fitness_ = 0.0;

  // scratch, reused across candidate evaluations
  std::vector<std::pair<std::uint32_t, std::int64_t>> shifts_;
  std::vector<std::uint32_t> affected_;
  std::vector<double> affected_contrib_;
};

}  // namespace nkmuddle
