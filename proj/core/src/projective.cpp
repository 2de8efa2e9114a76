// Projective chart decoder. Items are (span, head, head state); adjacent
// spans combine when the dependent side is complete and the edge label is
// admissible for the head state. Bottom tokens enter as ordinary items and
// attach through IGNORE.

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "decode_internal.hpp"

namespace am {

namespace {

struct Item {
  std::uint32_t head;
  StateSpace::StateId state;
  double score;
  // Backpointer: init items record the candidate; arcs record the split
  // point, both halves and which half holds the head.
  std::uint32_t cand = 0;
  std::uint32_t split = 0;
  std::uint32_t left = 0, right = 0;
  OpId op = 0;
  bool is_init = true;
  bool head_left = true;
};

class Chart {
 public:
  explicit Chart(std::size_t n)
      : n_(n), cells_((n + 2) * (n + 2)), index_((n + 2) * (n + 2)), deps_((n + 2) * (n + 2)) {}

  std::vector<Item>& cell(std::size_t i, std::size_t k) { return cells_[i * (n_ + 2) + k]; }

  // Complete items of a finished cell, best one per (head, type): a
  // dependent is only seen through its head token and its type.
  const std::vector<std::uint32_t>& dependents(std::size_t i, std::size_t k, StateSpace& space) {
    auto& d = deps_[i * (n_ + 2) + k];
    if (d) return *d;
    d.emplace();
    std::unordered_map<std::uint64_t, std::uint32_t> best;
    const auto& c = cell(i, k);
    for (std::uint32_t x = 0; x < c.size(); ++x) {
      if (!space.complete(c[x].state)) continue;
      std::uint64_t key = (static_cast<std::uint64_t>(c[x].head) << 32) | space.type(c[x].state).id();
      auto [it, fresh] = best.try_emplace(key, static_cast<std::uint32_t>(d->size()));
      if (fresh) d->push_back(x);
      else if (c[x].score > c[(*d)[it->second]].score) (*d)[it->second] = x;
    }
    return *d;
  }

  // Keeps the better of two items with the same (head, state); the first
  // one wins ties.
  bool offer(std::size_t i, std::size_t k, const Item& item) {
    auto& idx = index_[i * (n_ + 2) + k];
    std::uint64_t key = (static_cast<std::uint64_t>(item.head) << 32) | item.state;
    auto it = idx.find(key);
    auto& c = cell(i, k);
    if (it == idx.end()) {
      idx.emplace(key, static_cast<std::uint32_t>(c.size()));
      c.push_back(item);
      return true;
    }
    if (item.score > c[it->second].score) c[it->second] = item;
    return false;
  }

 private:
  std::size_t n_;
  std::vector<std::vector<Item>> cells_;
  std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> index_;
  std::vector<std::optional<std::vector<std::uint32_t>>> deps_;
};

}  // namespace

DecodeResult projective_decode(const ScoreTable& table, const DecodeOptions& options) {
  const std::size_t n = table.size();
  if (n == 0) throw DecodeError("empty sentence");
  if (options.k == 0) throw DecodeError("k must be at least 1");
  StateSpace& space = StateSpace::local();
  detail::Budget budget(options);
  Chart chart(n);
  std::size_t items = 0;

  for (std::size_t h = 1; h <= n; ++h) {
    auto ks = table.kbest(h, options.k);
    if (ks.empty()) throw DecodeError("token " + std::to_string(h) + " has no usable candidate");
    for (std::size_t c : ks) {
      const auto& cand = table.candidates(h)[c];
      Item it{static_cast<std::uint32_t>(h), space.initial(cand.type), cand.score};
      it.cand = static_cast<std::uint32_t>(c);
      if (chart.offer(h, h + 1, it)) budget.check(++items);
    }
  }

  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 1; i + len <= n + 1; ++i) {
      std::size_t k = i + len;
      for (std::size_t j = i + 1; j < k; ++j) {
        // Only cell (i,k) grows in this loop, so these references stay valid.
        const auto& L = chart.cell(i, j);
        const auto& R = chart.cell(j, k);
        for (int side = 0; side < 2; ++side) {
          const auto& heads = side == 0 ? L : R;
          const auto& deps = side == 0 ? R : L;
          const auto& usable = side == 0 ? chart.dependents(j, k, space) : chart.dependents(i, j, space);
          for (std::uint32_t hi = 0; hi < heads.size(); ++hi) {
            const Item& hd = heads[hi];
            for (std::uint32_t di : usable) {
              const Item& dp = deps[di];
              AmType dtype = space.type(dp.state);
              for (OpId op : space.candidates(hd.state, dtype)) {
                double arc = detail::arc_score(table, hd.head, dp.head, op);
                if (arc == kNegInf) continue;
                auto ns = space.attach(hd.state, op, dtype);
                if (ns == StateSpace::kDead) continue;
                Item it{hd.head, ns, hd.score + dp.score + arc};
                it.is_init = false;
                it.split = static_cast<std::uint32_t>(j);
                it.head_left = side == 0;
                it.left = side == 0 ? hi : di;
                it.right = side == 0 ? di : hi;
                it.op = op;
                if (chart.offer(i, k, it)) budget.check(++items);
              }
            }
          }
        }
      }
    }
  }

  const auto& full = chart.cell(1, n + 1);
  std::optional<std::uint32_t> best;
  std::size_t best_open = 0;
  for (std::uint32_t x = 0; x < full.size(); ++x) {
    const Item& it = full[x];
    if (!space.complete(it.state) || table.edge(0, it.head) == kNegInf) continue;
    AmType t = space.type(it.state);
    if (t.is_bottom()) continue;
    std::size_t open = t.size();
    if (!best || detail::better_goal(open, it.score, best_open, full[*best].score)) {
      best = x;
      best_open = open;
    }
  }
  if (!best) throw DecodeError("no complete derivation covers the sentence");

  std::vector<std::size_t> choices(n, 0), heads(n, 0);
  std::vector<std::optional<EdgeOp>> labels(n);
  struct Frame {
    std::size_t i, k;
    std::uint32_t idx;
  };
  std::vector<Frame> stack{{1, n + 1, *best}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const Item& it = chart.cell(f.i, f.k)[f.idx];
    if (it.is_init) {
      choices[it.head - 1] = it.cand;
      continue;
    }
    const Item& l = chart.cell(f.i, it.split)[it.left];
    const Item& r = chart.cell(it.split, f.k)[it.right];
    const Item& dep = it.head_left ? r : l;
    heads[dep.head - 1] = it.head;
    labels[dep.head - 1] = op_from_id(it.op);
    stack.push_back({f.i, it.split, it.left});
    stack.push_back({it.split, f.k, it.right});
  }

  DecodeStats stats;
  stats.items = items;
  std::unordered_set<std::uint32_t> types, states;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t k = i + 1; k <= n + 1; ++k)
      for (const Item& it : chart.cell(i, k)) {
        types.insert(space.type(it.state).id());
        states.insert(it.state);
      }
  stats.distinct_types = types.size();
  stats.distinct_states = states.size();
  return detail::finish_result(table, std::move(choices), heads, labels, stats);
}

}  // namespace am
