#pragma once

#include "nkmuddle/landscape.hpp"

namespace fixtures {

// Tiny hand-built instance used across the suite. n=2, k=1, mutual
// dependence; all expected values below are hand lookups in this table.
//
//   row | node0 | node1        row = focal bit * 2 + neighbor bit
//   ----+-------+------
//    0  | 0.10  | 0.50
//    1  | 0.20  | 0.60
//    2  | 0.35  | 0.70
//    3  | 0.40  | 0.80
inline nkmuddle::Landscape l2() {
  return nkmuddle::landscape_from_parts(
      /*seed=*/0, /*n=*/2, /*k=*/1, nkmuddle::InteractionScheme::random,
      {{1}, {0}},
      {{0.10, 0.50}, {0.20, 0.60}, {0.35, 0.70}, {0.40, 0.80}});
}

inline nkmuddle::Configuration conf(std::initializer_list<int> bits) {
  nkmuddle::Configuration c;
  for (int b : bits) c.bits.push_back(static_cast<std::uint8_t>(b));
  return c;
}

}  // namespace fixtures
