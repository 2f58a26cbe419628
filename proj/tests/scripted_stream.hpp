#pragma once

#include <cstdint>
#include <deque>
#include <stdexcept>

namespace fixtures {

// Test stream with pre-scripted outputs; running past the script throws so
// tests notice unexpected extra draws.
struct ScriptedStream {
  std::deque<std::uint64_t> ints;
  std::deque<double> reals;

  std::uint64_t uniform_below(std::uint64_t bound) {
    if (ints.empty()) throw std::runtime_error("scripted stream: int script exhausted");
    const auto v = ints.front();
    ints.pop_front();
    if (v >= bound) throw std::runtime_error("scripted stream: value out of bound");
    return v;
  }

  double unit_real() {
    if (reals.empty()) throw std::runtime_error("scripted stream: real script exhausted");
    const auto v = reals.front();
    reals.pop_front();
    return v;
  }

  bool bernoulli(double p) { return unit_real() < p; }
};

}  // namespace fixtures
