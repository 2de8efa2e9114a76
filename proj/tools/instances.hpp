#pragma once

// Random score tables over a small fixed supertag inventory, for
// oracle-compare and the benchmarks.

#include <cstdint>
#include <random>

#include "am/score_table.hpp"

namespace amparse {

struct InstanceShape {
  std::size_t n = 5;
  std::size_t candidates = 3;  // non-bottom candidates per token
  double bottom_rate = 0.3;    // chance that a token also offers bottom
};

am::ScoreTable random_instance(std::mt19937_64& rng, const InstanceShape& shape);

}  // namespace amparse
