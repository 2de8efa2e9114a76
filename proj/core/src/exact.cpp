// Exact decoder: maximises the tree score over every dependency tree and every
// supertag assignment. The search is a dynamic program over (subtree root,
// set of its descendants, head state); each step attaches one child subtree
// containing the lowest remaining descendant, so every tree is built once.
// Exponential by design.

#include <algorithm>
#include <bit>
#include <unordered_map>
#include <unordered_set>

#include "decode_internal.hpp"

namespace am {

namespace {

using Mask = std::uint32_t;

struct TypeScore {
  std::uint32_t type;  // local type index
  double score;
};

struct PEntry {
  StateSpace::StateId state;
  double score;
  // back
  std::uint32_t cand;  // initial entries
  Mask prev_mask;
  std::uint32_t prev_entry;
  std::uint32_t child;
  std::uint32_t child_type;
  OpId op;
};

// Buffers reused across calls on the same thread.
struct Workspace {
  std::size_t n = 0;
  std::vector<Mask> by_size;  // all masks, ascending popcount
  std::vector<std::vector<TypeScore>> sub;
  std::vector<std::vector<PEntry>> partial;
};

Workspace& workspace(std::size_t n) {
  thread_local Workspace ws;
  if (ws.n != n) {
    ws.n = n;
    ws.by_size.resize(std::size_t{1} << n);
    for (Mask m = 0; m < ws.by_size.size(); ++m) ws.by_size[m] = m;
    std::stable_sort(ws.by_size.begin(), ws.by_size.end(),
                     [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });
    ws.sub.assign(n << n, {});
    ws.partial.assign(std::size_t{1} << n, {});
  }
  return ws;
}

class ExactSearch {
 public:
  ExactSearch(const ScoreTable& table, const DecodeOptions& options)
      : table_(table),
        options_(options),
        n_(table.size()),
        full_((Mask{1} << n_) - 1),
        space_(StateSpace::local()),
        budget_(options),
        ws_(workspace(n_)),
        sub_(ws_.sub),
        partial_(ws_.partial) {
    for (auto& v : sub_) v.clear();
    for (std::size_t i = 1; i <= n_; ++i) {
      auto ks = table.kbest(i, options.k);
      if (ks.empty()) throw DecodeError("token " + std::to_string(i) + " has no usable candidate");
      cands_.push_back(ks);
    }
    arc_.assign((n_ + 1) * (n_ + 1), {});
  }

  DecodeResult run() {
    for (Mask D : ws_.by_size) {
      for (std::size_t d = 0; d < n_; ++d) {
        if (D >> d & 1) continue;
        if (D == (full_ ^ (Mask{1} << d)) && !allowed(0, d + 1)) continue;
        solve(d, D, false);
      }
    }

    std::optional<std::size_t> best_root;
    TypeScore best{0, 0.0};
    std::size_t best_open = 0;
    for (std::size_t r = 0; r < n_; ++r) {
      if (!allowed(0, r + 1)) continue;
      for (const TypeScore& ts : sub(r, full_ ^ (Mask{1} << r))) {
        const AmType& t = types_[ts.type];
        if (t.is_bottom()) continue;
        if (!best_root || detail::better_goal(t.size(), ts.score, best_open, best.score)) {
          best_root = r;
          best = ts;
          best_open = t.size();
        }
      }
    }
    if (!best_root) throw DecodeError("no well-typed tree exists");

    const std::size_t items = items_;
    choices_.assign(n_, 0);
    heads_.assign(n_, 0);
    labels_.assign(n_, std::nullopt);
    rebuild(*best_root, full_ ^ (Mask{1} << *best_root), best.type);

    DecodeStats stats;
    stats.items = items;
    stats.distinct_types = types_.size();
    stats.distinct_states = states_seen_.size();
    return detail::finish_result(table_, choices_, heads_, labels_, stats);
  }

 private:
  bool allowed(std::size_t h, std::size_t d) const {
    if (h == 0 && table_.edge(0, d) == kNegInf) return false;
    return !options_.allowed || (*options_.allowed)[h][d];
  }

  std::vector<TypeScore>& sub(std::size_t d, Mask D) { return sub_[(static_cast<std::size_t>(d) << n_) | D]; }

  std::uint32_t local_type(const AmType& t) {
    auto [it, fresh] = type_index_.try_emplace(t.id(), static_cast<std::uint32_t>(types_.size()));
    if (fresh) types_.push_back(t);
    return it->second;
  }

  // Finite E + L for every op listed or defaulted on (h,d), cached per arc.
  double arc(std::size_t h, std::size_t d, OpId op) {
    auto& cache = arc_[h * (n_ + 1) + d];
    for (const auto& [o, s] : cache)
      if (o == op) return s;
    double s = allowed(h, d) ? detail::arc_score(table_, h, d, op) : kNegInf;
    cache.emplace_back(op, s);
    return s;
  }

  static void offer(std::vector<PEntry>& cell, const PEntry& e, bool& fresh) {
    for (auto& x : cell)
      if (x.state == e.state) {
        fresh = false;
        if (e.score > x.score) x = e;
        return;
      }
    fresh = true;
    cell.push_back(e);
  }

  // Fills the partial table for root d over descendant set D. Results go to
  // sub(d, D) unless `keep` is set, in which case the partial table is left
  // in partial_ for back-tracing.
  void solve(std::size_t d, Mask D, bool keep) {
    for (Mask m = D;; m = (m - 1) & D) {
      partial_[m].clear();
      if (m == 0) break;
    }
    bool fresh = false;
    for (std::size_t c : cands_[d]) {
      const auto& cand = table_.candidates(d + 1)[c];
      PEntry e{space_.initial(cand.type), cand.score, static_cast<std::uint32_t>(c), 0, 0, 0, 0, 0};
      offer(partial_[0], e, fresh);
      if (fresh) budget_.check(++items_);
    }
    // Submasks of D in ascending order, so every contributor of a mask is
    // final before the mask is extended.
    for (Mask m = 0; m != D; m = (m - D) & D) {
      if (partial_[m].empty()) continue;
      Mask R = D & ~m;
      Mask low = R & (~R + 1);
      Mask rest = R ^ low;
      for (Mask s = rest;; s = (s - 1) & rest) {
        Mask T = s | low;
        for (std::size_t c = 0; c < n_; ++c) {
          if (!(T >> c & 1)) continue;
          const auto& subs = sub(c, T ^ (Mask{1} << c));
          if (subs.empty()) continue;
          for (std::uint32_t pe = 0; pe < partial_[m].size(); ++pe) {
            const PEntry cur = partial_[m][pe];
            for (const TypeScore& ts : subs) {
              const AmType& ctype = types_[ts.type];
              for (OpId op : space_.candidates(cur.state, ctype)) {
                double a = arc(d + 1, c + 1, op);
                if (a == kNegInf) continue;
                auto ns = space_.attach(cur.state, op, ctype);
                if (ns == StateSpace::kDead) continue;
                PEntry e{ns, cur.score + ts.score + a, 0, m, pe, static_cast<std::uint32_t>(c),
                         ts.type, op};
                offer(partial_[m | T], e, fresh);
                if (fresh) {
                  states_seen_.insert(ns);
                  budget_.check(++items_);
                }
              }
            }
          }
        }
        if (s == 0) break;
      }
    }
    if (keep) return;
    auto& out = sub(d, D);
    for (const PEntry& e : partial_[D]) {
      if (!space_.complete(e.state)) continue;
      std::uint32_t t = local_type(space_.type(e.state));
      auto it = std::find_if(out.begin(), out.end(), [&](const TypeScore& x) { return x.type == t; });
      if (it == out.end()) {
        out.push_back(TypeScore{t, e.score});
      } else if (e.score > it->score) {
        it->score = e.score;
      }
    }
  }

  void rebuild(std::size_t d, Mask D, std::uint32_t type) {
    solve(d, D, true);
    // Pick the best complete entry of that type; same choice as in solve().
    const PEntry* best = nullptr;
    for (const PEntry& e : partial_[D]) {
      if (!space_.complete(e.state) || local_type(space_.type(e.state)) != type) continue;
      if (!best || e.score > best->score) best = &e;
    }
    struct Step {
      std::size_t child;
      Mask sub;
      std::uint32_t type;
    };
    std::vector<Step> steps;
    Mask m = D;
    PEntry e = *best;
    while (m != 0) {
      Mask T = m ^ e.prev_mask;
      heads_[e.child] = d + 1;
      labels_[e.child] = op_from_id(e.op);
      steps.push_back(Step{e.child, T ^ (Mask{1} << e.child), e.child_type});
      m = e.prev_mask;
      e = partial_[m][e.prev_entry];
    }
    choices_[d] = e.cand;
    for (const Step& s : steps) rebuild(s.child, s.sub, s.type);
  }

  const ScoreTable& table_;
  const DecodeOptions& options_;
  std::size_t n_;
  Mask full_;
  StateSpace& space_;
  detail::Budget budget_;
  std::vector<std::vector<std::size_t>> cands_;
  Workspace& ws_;
  std::vector<std::vector<TypeScore>>& sub_;
  std::vector<std::vector<PEntry>>& partial_;
  std::vector<std::vector<std::pair<OpId, double>>> arc_;
  std::vector<AmType> types_;
  std::unordered_map<std::uint32_t, std::uint32_t> type_index_;
  std::unordered_set<StateSpace::StateId> states_seen_;
  std::size_t items_ = 0;
  std::vector<std::size_t> choices_, heads_;
  std::vector<std::optional<EdgeOp>> labels_;
};

}  // namespace

DecodeResult exact_decode(const ScoreTable& table, const DecodeOptions& options) {
  const std::size_t n = table.size();
  if (n == 0) throw DecodeError("empty sentence");
  if (n > options.guard_n || n > 20)
    throw DecodeError("exact decoding refused: " + std::to_string(n) + " tokens exceeds guard " +
                      std::to_string(options.guard_n));
  if (options.k == 0) throw DecodeError("k must be at least 1");
  return ExactSearch(table, options).run();
}

}  // namespace am
