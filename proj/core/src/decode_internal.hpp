#pragma once

#include <chrono>

#include "am/decode.hpp"
#include "am/error.hpp"

namespace am::detail {

class Budget {
 public:
  explicit Budget(const DecodeOptions& options)
      : max_items_(options.max_items),
        limit_(options.time_limit),
        start_(std::chrono::steady_clock::now()) {}

  void check(std::size_t items) {
    if (max_items_ && items > max_items_) throw DecodeTimeout("item budget exhausted");
    if (limit_ > 0 && (++calls_ & 0x3ff) == 0) {
      std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
      if (d.count() > limit_) throw DecodeTimeout("time limit exceeded");
    }
  }

 private:
  std::size_t max_items_;
  double limit_;
  std::chrono::steady_clock::time_point start_;
  std::size_t calls_ = 0;
};

/// Builds the result tree, recomputes its score and derives the
/// status from the root type.
DecodeResult finish_result(const ScoreTable& table, std::vector<std::size_t> choices,
                           const std::vector<std::size_t>& heads,
                           const std::vector<std::optional<EdgeOp>>& labels, DecodeStats stats);

/// E(h,d) + L(op|h,d), or -inf when either part is forbidden.
inline double arc_score(const ScoreTable& table, std::size_t h, std::size_t d, OpId op) {
  double e = table.edge(h, d);
  if (e == kNegInf) return kNegInf;
  double l = table.label(h, d, op);
  if (l == kNegInf) return kNegInf;
  return e + l;
}

/// Orders goal candidates: fewer open sources (zero is a proper goal), then
/// higher score.
inline bool better_goal(std::size_t open, double score, std::size_t best_open, double best_score) {
  if (open != best_open) return open < best_open;
  return score > best_score;
}

}  // namespace am::detail
