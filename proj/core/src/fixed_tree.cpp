// Fixed-tree decoder: the unlabeled tree comes from the maximum
// arborescence, then supertags and edge labels are chosen bottom-up.
//
// Items <i, C, tau> would range over subsets C of the children of i.
// Attachment to a head state does not depend on the order in which children
// arrive, so the children are folded in a fixed order and the subset
// dimension collapses to a prefix length.

#include <map>
#include <unordered_map>
#include <unordered_set>

#include "decode_internal.hpp"

namespace am {

namespace {

struct Back {
  StateSpace::StateId prev;
  std::uint32_t child_type;  // AmType id of the child's subtree
  OpId op;
};

struct Cell {
  double score;
  Back back;
};

struct Best {
  double score;
  std::size_t cand;
  StateSpace::StateId state;
};

struct NodeTables {
  // best[type id] over all candidates
  std::map<std::uint32_t, Best> best;
  // layers[cand][j] : state -> cell after folding the first j children
  std::map<std::size_t, std::vector<std::unordered_map<StateSpace::StateId, Cell>>> layers;
};

}  // namespace

DecodeResult fixed_tree_decode(const ScoreTable& table, const Skeleton& skeleton,
                               const DecodeOptions& options) {
  const std::size_t n = table.size();
  if (n == 0) throw DecodeError("empty sentence");
  if (skeleton.size() != n) throw DecodeError("skeleton size mismatch");
  if (options.k == 0) throw DecodeError("k must be at least 1");
  StateSpace& space = StateSpace::local();
  detail::Budget budget(options);

  std::vector<std::vector<std::size_t>> ch(n + 1);
  for (std::size_t d = 1; d <= n; ++d) ch[skeleton[d - 1]].push_back(d);
  if (ch[0].size() != 1) throw DecodeError("skeleton must have exactly one root");
  const std::size_t root = ch[0][0];

  std::vector<std::size_t> order, stack{root};
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (std::size_t c : ch[u]) stack.push_back(c);
  }
  if (order.size() != n) throw DecodeError("skeleton is not a tree");

  std::unordered_map<std::uint32_t, AmType> type_by_id;
  std::vector<NodeTables> tables(n + 1);
  std::size_t items = 0;
  std::unordered_set<std::uint32_t> seen_types, seen_states;

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t i = *it;
    NodeTables& nt = tables[i];
    for (std::size_t c : table.kbest(i, options.k)) {
      const auto& cand = table.candidates(i)[c];
      auto& layers = nt.layers[c];
      layers.resize(ch[i].size() + 1);
      layers[0].emplace(space.initial(cand.type), Cell{cand.score, Back{0, 0, 0}});
      ++items;
      for (std::size_t j = 0; j < ch[i].size(); ++j) {
        const std::size_t d = ch[i][j];
        for (const auto& [state, cell] : layers[j]) {
          for (const auto& [tid, child] : tables[d].best) {
            const AmType& ctype = type_by_id.at(tid);
            for (OpId op : space.candidates(state, ctype)) {
              double arc = detail::arc_score(table, i, d, op);
              if (arc == kNegInf) continue;
              auto ns = space.attach(state, op, ctype);
              if (ns == StateSpace::kDead) continue;
              double s = cell.score + child.score + arc;
              auto [pos, fresh] = layers[j + 1].try_emplace(ns, Cell{s, Back{state, tid, op}});
              if (fresh) {
                seen_states.insert(ns);
                budget.check(++items);
              } else if (s > pos->second.score) {
                pos->second = Cell{s, Back{state, tid, op}};
              }
            }
          }
        }
      }
      for (const auto& [state, cell] : layers.back()) {
        if (!space.complete(state)) continue;
        AmType t = space.type(state);
        type_by_id.emplace(t.id(), t);
        seen_types.insert(t.id());
        auto [pos, fresh] = nt.best.try_emplace(t.id(), Best{cell.score, c, state});
        if (!fresh && cell.score > pos->second.score) pos->second = Best{cell.score, c, state};
      }
    }
  }

  std::optional<std::uint32_t> goal;
  std::size_t goal_open = 0;
  for (const auto& [tid, b] : tables[root].best) {
    const AmType& t = type_by_id.at(tid);
    if (t.is_bottom()) continue;
    if (!goal || detail::better_goal(t.size(), b.score, goal_open, tables[root].best.at(*goal).score)) {
      goal = tid;
      goal_open = t.size();
    }
  }
  if (!goal) throw DecodeError("no well-typed labeling of the skeleton");

  std::vector<std::size_t> choices(n, 0);
  std::vector<std::optional<EdgeOp>> labels(n);
  std::vector<std::pair<std::size_t, std::uint32_t>> todo{{root, *goal}};
  while (!todo.empty()) {
    auto [i, tid] = todo.back();
    todo.pop_back();
    const Best& b = tables[i].best.at(tid);
    choices[i - 1] = b.cand;
    const auto& layers = tables[i].layers.at(b.cand);
    StateSpace::StateId s = b.state;
    for (std::size_t j = ch[i].size(); j-- > 0;) {
      const Cell& cell = layers[j + 1].at(s);
      labels[ch[i][j] - 1] = op_from_id(cell.back.op);
      todo.emplace_back(ch[i][j], cell.back.child_type);
      s = cell.back.prev;
    }
  }

  DecodeStats stats;
  stats.items = items;
  stats.distinct_types = seen_types.size();
  stats.distinct_states = seen_states.size();
  return detail::finish_result(table, std::move(choices), skeleton, labels, stats);
}

DecodeResult fixed_tree_decode(const ScoreTable& table, const DecodeOptions& options) {
  return fixed_tree_decode(table, cle_arborescence(table), options);
}

}  // namespace am
