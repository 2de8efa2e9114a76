#include <algorithm>

#include "decode_internal.hpp"

namespace am {

const char* status_name(DecodeStatus status) {
  switch (status) {
    case DecodeStatus::kExactGoal: return "exact-goal";
    case DecodeStatus::kOpenSourceFallback: return "open-source-fallback";
    case DecodeStatus::kSubtreeFallback: return "subtree-fallback";
  }
  return "unknown";
}

DecodeResult decode_with_retry(const Decoder& decoder, const ScoreTable& table,
                               DecodeOptions options) {
  for (;;) {
    try {
      return decoder(table, options);
    } catch (const DecodeTimeout&) {
      if (options.k <= 1) throw;
      --options.k;
    }
  }
}

namespace detail {

DecodeResult finish_result(const ScoreTable& table, std::vector<std::size_t> choices,
                           const std::vector<std::size_t>& heads,
                           const std::vector<std::optional<EdgeOp>>& labels, DecodeStats stats) {
  DecodeResult r;
  r.tree = make_tree(table, choices, heads, labels);
  r.choices = std::move(choices);
  auto types = check_well_typed(r.tree);
  if (!types) throw DecodeError("decoder produced an ill-typed tree");
  r.score = score_tree(table, r.tree, r.choices);
  AmType root_type = (*types)[r.tree.root() - 1];
  r.open_sources = open_source_count(root_type);
  r.status = r.open_sources == 0 ? DecodeStatus::kExactGoal : DecodeStatus::kOpenSourceFallback;
  r.stats = stats;
  return r;
}

}  // namespace detail

}  // namespace am
