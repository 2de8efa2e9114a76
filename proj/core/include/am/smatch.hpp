#pragma once

// Smatch: triple overlap between two AMRs under the best variable mapping
// that seeded hill-climbing finds.

#include <cstdint>
#include <vector>

#include "am/asgraph.hpp"

namespace am {

struct SmatchCounts {
  std::size_t matched = 0;
  std::size_t test_total = 0;
  std::size_t gold_total = 0;

  double precision() const;
  double recall() const;
  /// Two empty graphs score 1.
  double f() const;

  SmatchCounts& operator+=(const SmatchCounts& other);
};

struct SmatchOptions {
  std::size_t restarts = 4;  // random starts on top of the smart one
  std::uint64_t seed = 0;
};

/// Triples: one instance triple per variable, one relation triple per edge
/// between variables, one attribute triple per edge into a constant leaf
/// (quoted strings, numbers, "-", "+"). There is no TOP triple. Source
/// decorations are ignored.
SmatchCounts smatch(const AsGraph& test, const AsGraph& gold, const SmatchOptions& options = {});

/// Micro average over sentence pairs.
SmatchCounts smatch_corpus(const std::vector<AsGraph>& test, const std::vector<AsGraph>& gold,
                           const SmatchOptions& options = {});

}  // namespace am
