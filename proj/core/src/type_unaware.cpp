// Baseline that ignores types: maximum arborescence, individually best
// supertags and labels, then the largest well-typed subtree if the whole
// tree does not type-check.

#include <algorithm>
#include <map>
#include <set>

#include "decode_internal.hpp"

namespace am {

namespace {

std::vector<EdgeOp> op_inventory(const ScoreTable& table) {
  std::map<std::string, EdgeOp> ops;
  const std::size_t n = table.size();
  for (std::size_t h = 0; h <= n; ++h)
    for (std::size_t d = 1; d <= n; ++d) {
      if (h == d) continue;
      for (const auto& [id, s] : table.listed_labels(h, d)) {
        const EdgeOp& op = op_from_id(id);
        ops.emplace(op.str(), op);
      }
    }
  for (std::size_t i = 1; i <= n; ++i)
    for (const auto& c : table.candidates(i))
      for (const auto& name : c.type.is_bottom() ? std::vector<std::string>{} : c.type.all_names()) {
        ops.emplace("APP_" + name, EdgeOp::apply(name));
        ops.emplace("MOD_" + name, EdgeOp::modify(name));
      }
  std::vector<EdgeOp> out;
  for (auto& [k, op] : ops)
    if (!op.is_ignore()) out.push_back(op);
  return out;
}

std::optional<std::size_t> best_bottom(const ScoreTable& table, std::size_t i) {
  std::optional<std::size_t> best;
  const auto& cands = table.candidates(i);
  for (std::size_t c = 0; c < cands.size(); ++c) {
    if (cands[c].graph || cands[c].score == kNegInf) continue;
    if (!best || cands[c].score > cands[*best].score) best = c;
  }
  return best;
}

bool typed_with_content_root(const AmDepTree& tree) {
  auto types = check_well_typed(tree);
  return types && !(*types)[tree.root() - 1].is_bottom();
}

}  // namespace

DecodeResult type_unaware_decode(const ScoreTable& table, const DecodeOptions& options) {
  (void)options;
  const std::size_t n = table.size();
  if (n == 0) throw DecodeError("empty sentence");
  Skeleton heads = cle_arborescence(table);

  std::vector<std::size_t> choices(n, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& cands = table.candidates(i);
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (cands[c].score == kNegInf) continue;
      if (!best || cands[c].score > cands[*best].score) best = c;
    }
    if (!best) throw DecodeError("token " + std::to_string(i) + " has no usable candidate");
    choices[i - 1] = *best;
  }

  const auto inventory = op_inventory(table);
  std::vector<std::optional<EdgeOp>> labels(n);
  for (std::size_t d = 1; d <= n; ++d) {
    std::size_t h = heads[d - 1];
    if (h == 0) continue;
    if (!table.candidates(d)[choices[d - 1]].graph) {
      labels[d - 1] = EdgeOp::ignore();
      continue;
    }
    std::optional<EdgeOp> best;
    double best_score = kNegInf;
    for (const auto& op : inventory) {
      double s = table.label(h, d, op);
      if (!best || s > best_score) {
        best = op;
        best_score = s;
      }
    }
    // Without any source name in sight there is nothing to label with.
    labels[d - 1] = best ? *best : EdgeOp::apply("s");
  }

  DecodeStats stats;
  stats.items = n;
  AmDepTree whole = make_tree(table, choices, heads, labels);
  if (typed_with_content_root(whole)) return detail::finish_result(table, choices, heads, labels, stats);

  // Largest well-typed subtree; everything else becomes bottom and hangs
  // off the subtree root through IGNORE.
  std::vector<std::vector<std::size_t>> ch(n + 1);
  for (std::size_t d = 1; d <= n; ++d) ch[heads[d - 1]].push_back(d);
  std::optional<DecodeResult> best;
  std::size_t best_size = 0;
  for (std::size_t r = 1; r <= n; ++r) {
    if (!table.candidates(r)[choices[r - 1]].graph) continue;
    std::vector<char> inside(n + 1, 0);
    std::vector<std::size_t> stack{r};
    std::size_t size = 0;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      inside[u] = 1;
      ++size;
      for (std::size_t c : ch[u]) stack.push_back(c);
    }
    if (best && size < best_size) continue;
    std::vector<std::size_t> sub_choices = choices, sub_heads = heads;
    std::vector<std::optional<EdgeOp>> sub_labels = labels;
    bool possible = true;
    for (std::size_t i = 1; i <= n && possible; ++i) {
      if (i == r) {
        sub_heads[i - 1] = 0;
        sub_labels[i - 1].reset();
        continue;
      }
      if (inside[i]) continue;
      auto b = best_bottom(table, i);
      if (!b) {
        possible = false;
        break;
      }
      sub_choices[i - 1] = *b;
      sub_heads[i - 1] = r;
      sub_labels[i - 1] = EdgeOp::ignore();
    }
    if (!possible) continue;
    AmDepTree t = make_tree(table, sub_choices, sub_heads, sub_labels);
    if (!typed_with_content_root(t)) continue;
    DecodeResult res = detail::finish_result(table, sub_choices, sub_heads, sub_labels, stats);
    if (!best || size > best_size || res.score > best->score) {
      best = std::move(res);
      best_size = size;
    }
  }
  if (!best) throw DecodeError("no well-typed subtree");
  best->status = DecodeStatus::kSubtreeFallback;
  return *best;
}

}  // namespace am
