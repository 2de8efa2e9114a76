// Blob decomposition of an aligned AMR.
//
// Each token's aligned nodes form a fragment. Every edge between fragments
// belongs to one endpoint (BlobPolicy); the owner gets an unlabeled
// placeholder for the other endpoint, which must be the other fragment's
// root. The fragment tree is read off breadth-first from the fragment that
// holds the AMR root: a fragment hangs below the single closer neighbour it
// shares an edge with (APP if the neighbour holds its root, MOD if it holds
// the neighbour's root), or below the lowest common ancestor of several
// closer neighbours that all hold its root (a reentrancy). All placeholders
// of one node share one source name, so that they unify on the way up.

#include "am/decompose.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>

#include "am/error.hpp"

namespace am {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Failure {
  std::string reason;
  std::string detail;
};

struct Hole {
  AsGraph::NodeId node;            // AMR node, root of another fragment
  std::vector<std::size_t> edges;  // owned AMR edges touching it
  std::string natural;
  std::string name;
};

struct Frag {
  std::size_t token = 0;
  std::vector<AsGraph::NodeId> nodes;
  AsGraph::NodeId root = 0;
  std::vector<std::size_t> internal;
  std::vector<Hole> holes;
  std::size_t parent = kNone;
  bool app = true;  // relation to the parent
  std::size_t depth = 0;
  std::vector<std::size_t> children;

  Hole* hole_for(AsGraph::NodeId v) {
    for (auto& h : holes)
      if (h.node == v) return &h;
    return nullptr;
  }
};

bool connected(const AsGraph& g) {
  if (g.node_count() == 0) return true;
  std::vector<std::vector<AsGraph::NodeId>> adj(g.node_count());
  for (const auto& e : g.edges()) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  std::vector<char> seen(g.node_count(), 0);
  std::vector<AsGraph::NodeId> stack{g.root()};
  seen[g.root()] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (auto v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
  }
  return count == g.node_count();
}

class Decomposer {
 public:
  Decomposer(const AsGraph& g, const Alignment& al, const std::vector<Token>& tokens, const BlobPolicy& p)
      : g_(g), al_(al), tokens_(tokens), policy_(p) {}

  Decomposition run() {
    collect_fragments();
    collect_holes();
    for (auto& f : frags_) natural_names(f);
    build_tree();
    unify_names();
    return assemble();
  }

 private:
  [[noreturn]] static void fail(std::string reason, std::string detail) {
    throw Failure{std::move(reason), std::move(detail)};
  }

  std::string node_name(AsGraph::NodeId u) const { return g_.label(u).value_or("?"); }

  void collect_fragments() {
    if (al_.node_token.size() != g_.node_count()) fail("unaligned-node", "alignment size mismatch");
    std::map<std::size_t, std::size_t> by_token;
    frag_of_.assign(g_.node_count(), kNone);
    for (AsGraph::NodeId u = 0; u < g_.node_count(); ++u) {
      std::size_t t = al_.node_token[u];
      if (t == 0 || t > tokens_.size()) fail("unaligned-node", node_name(u));
      by_token.try_emplace(t, 0);
    }
    for (auto& [t, idx] : by_token) {
      idx = frags_.size();
      frags_.push_back(Frag{});
      frags_.back().token = t;
    }
    for (AsGraph::NodeId u = 0; u < g_.node_count(); ++u) {
      frag_of_[u] = by_token[al_.node_token[u]];
      frags_[frag_of_[u]].nodes.push_back(u);
    }
    for (auto& f : frags_) {
      auto roots = fragment_root_candidates(g_, al_.node_token, f.token, policy_);
      if (roots.size() != 1)
        fail("multi-root-fragment", "token " + std::to_string(f.token) + " has " +
                                        std::to_string(roots.size()) + " roots");
      f.root = roots[0];
    }
    if (frags_[frag_of_[g_.root()]].root != g_.root()) fail("multi-root-fragment", "graph root is not a fragment root");
  }

  void collect_holes() {
    const auto& edges = g_.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto& e = edges[i];
      std::size_t a = frag_of_[e.from], b = frag_of_[e.to];
      if (a == b) {
        frags_[a].internal.push_back(i);
        continue;
      }
      bool src = policy_.owner(e.label) == Owner::kSource;
      AsGraph::NodeId owner = src ? e.from : e.to, other = src ? e.to : e.from;
      Frag& h = frags_[frag_of_[owner]];
      if (frags_[frag_of_[other]].root != other)
        fail("multi-root-fragment", ":" + e.label + " lands inside the fragment of token " +
                                        std::to_string(frags_[frag_of_[other]].token));
      Hole* hole = h.hole_for(other);
      if (!hole) {
        h.holes.push_back(Hole{other, {}, "", ""});
        hole = &h.holes.back();
      }
      hole->edges.push_back(i);
    }
    // internal connectivity
    for (auto& f : frags_) {
      std::set<AsGraph::NodeId> seen{f.root};
      bool grew = true;
      while (grew) {
        grew = false;
        for (std::size_t i : f.internal) {
          const auto& e = edges[i];
          if (seen.count(e.from) != seen.count(e.to)) {
            seen.insert(e.from);
            seen.insert(e.to);
            grew = true;
          }
        }
      }
      if (seen.size() != f.nodes.size())
        fail("multi-root-fragment", "token " + std::to_string(f.token) + " is not connected");
    }
  }

  // Sort key of an edge for picking the one that names a placeholder.
  std::tuple<int, int, std::string> edge_key(std::size_t i) const {
    const auto& l = g_.edges()[i].label;
    auto k = arg_index(l);
    return {k ? 0 : 1, k.value_or(0), l};
  }

  void natural_names(Frag& f) {
    const auto& edges = g_.edges();
    auto in_frag = [&](AsGraph::NodeId u) { return frag_of_[u] != kNone && &frags_[frag_of_[u]] == &f; };
    bool has_arg0 = false;
    for (std::size_t i : f.internal) has_arg0 = has_arg0 || edges[i].label == "ARG0";
    for (const auto& h : f.holes)
      for (std::size_t i : h.edges) has_arg0 = has_arg0 || (edges[i].label == "ARG0" && in_frag(edges[i].from));

    std::vector<std::size_t> primary(f.holes.size());
    for (std::size_t j = 0; j < f.holes.size(); ++j) {
      auto& es = f.holes[j].edges;
      std::sort(es.begin(), es.end(), [&](std::size_t a, std::size_t b) { return edge_key(a) < edge_key(b); });
      primary[j] = es.front();
    }
    // Objects: ARGi (i > 0) edges into placeholders, ranked by i.
    std::vector<std::pair<int, std::size_t>> objects;
    for (std::size_t j = 0; j < f.holes.size(); ++j) {
      const auto& e = edges[primary[j]];
      auto k = arg_index(e.label);
      if (k && *k > 0 && e.to == f.holes[j].node &&
          policy_.rule(e.label).naming == Naming::kArgument)
        objects.emplace_back(*k, j);
    }
    std::sort(objects.begin(), objects.end());
    std::map<std::size_t, std::string> object_name;
    for (std::size_t r = 0; r < objects.size(); ++r) {
      std::size_t rank = has_arg0 ? r + 1 : r;  // unaccusative: first object is the subject
      object_name[objects[r].second] = rank == 0 ? "s" : rank == 1 ? "o" : "o" + std::to_string(rank);
    }

    std::vector<std::size_t> order(f.holes.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return edge_key(primary[a]) < edge_key(primary[b]); });
    std::set<std::string> used;
    for (std::size_t j : order) {
      const auto& e = edges[primary[j]];
      const OwnershipRule& r = policy_.rule(e.label);
      std::string name;
      if (object_name.count(j)) {
        name = object_name[j];
      } else if (r.naming == Naming::kArgument && arg_index(e.label) == 0 && e.to == f.holes[j].node) {
        name = "s";
      } else if (r.naming == Naming::kIndexed) {
        for (char c : e.label) name += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      } else {
        name = r.source.empty() ? "m" : r.source;
      }
      if (used.count(name)) {
        std::string base = name;
        for (int k = 2; used.count(name); ++k) name = base + std::to_string(k);
      }
      if (!is_valid_source_name(name)) fail("unnamable-edge", ":" + e.label + " -> \"" + name + "\"");
      used.insert(name);
      f.holes[j].natural = f.holes[j].name = name;
    }
  }

  bool holds(std::size_t h, std::size_t p) { return frags_[h].hole_for(frags_[p].root) != nullptr; }

  std::size_t lca(std::size_t a, std::size_t b) const {
    while (frags_[a].depth > frags_[b].depth) a = frags_[a].parent;
    while (frags_[b].depth > frags_[a].depth) b = frags_[b].parent;
    while (a != b) {
      a = frags_[a].parent;
      b = frags_[b].parent;
    }
    return a;
  }

  void build_tree() {
    const std::size_t m = frags_.size();
    std::vector<std::set<std::size_t>> adj(m);
    for (std::size_t h = 0; h < m; ++h)
      for (const auto& hole : frags_[h].holes) {
        std::size_t p = frag_of_[hole.node];
        adj[h].insert(p);
        adj[p].insert(h);
      }
    root_ = frag_of_[g_.root()];
    std::vector<std::size_t> dist(m, kNone), order{root_};
    dist[root_] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t v : adj[order[i]])
        if (dist[v] == kNone) {
          dist[v] = dist[order[i]] + 1;
          order.push_back(v);
        }
    if (order.size() != m) fail("multi-parent", "fragments are not connected");
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    order_ = order;

    for (std::size_t p : order) {
      if (p == root_) continue;
      std::vector<std::size_t> upper;
      for (std::size_t u : adj[p])
        if (dist[u] < dist[p]) upper.push_back(u);
      Frag& f = frags_[p];
      if (upper.size() == 1) {
        std::size_t u = upper[0];
        bool down = holds(u, p), up = holds(p, u);
        if (down && up)
          fail("annotation-conflict", "tokens " + std::to_string(frags_[u].token) + " and " +
                                          std::to_string(f.token) + " hold each other's roots");
        f.parent = u;
        f.app = down;
      } else {
        std::size_t a = upper[0];
        for (std::size_t u : upper) {
          if (!holds(u, p))
            fail("multi-parent", "token " + std::to_string(f.token) + " has several closer neighbours");
          a = lca(a, u);
        }
        f.parent = a;
        f.app = true;
      }
      f.depth = frags_[f.parent].depth + 1;
      frags_[f.parent].children.push_back(p);
    }
  }

  // Fragments from `h` up to `stop` (inclusive), or to the tree root.
  std::vector<std::size_t> path_up(std::size_t h, std::size_t stop) const {
    std::vector<std::size_t> out;
    for (std::size_t x = h; x != kNone; x = frags_[x].parent) {
      out.push_back(x);
      if (x == stop) break;
    }
    return out;
  }

  // Fragment whose subtree fills node v = root(q).
  std::size_t fill_point(std::size_t q) const { return frags_[q].parent != kNone && frags_[q].app ? frags_[q].parent : q; }

  void unify_names() {
    struct Named {
      std::string name;
      std::set<std::size_t> region;
    };
    std::vector<Named> named;
    for (std::size_t q : order_) {
      const AsGraph::NodeId v = frags_[q].root;
      std::vector<std::size_t> holders;
      for (std::size_t h = 0; h < frags_.size(); ++h) {
        // a modifier of q fills its placeholder by MOD and names it freely
        if (frags_[h].parent == q && !frags_[h].app) continue;
        if (frags_[h].hole_for(v)) holders.push_back(h);
      }
      if (holders.size() < 2) continue;
      const std::size_t fill = fill_point(q);
      std::set<std::size_t> region{fill};
      for (std::size_t h : holders)
        for (std::size_t x : path_up(h, fill)) region.insert(x);

      std::vector<std::string> cands;
      if (frags_[q].app && frags_[q].parent != kNone && frags_[frags_[q].parent].hole_for(v))
        cands.push_back(frags_[frags_[q].parent].hole_for(v)->natural);
      for (std::size_t h : holders) cands.push_back(frags_[h].hole_for(v)->natural);
      cands.push_back("r");
      for (int k = 2; k < 10; ++k) cands.push_back("r" + std::to_string(k));

      std::optional<std::string> pick;
      for (const auto& c : cands) {
        bool ok = true;
        for (std::size_t x : region)
          for (const auto& hole : frags_[x].holes)
            if (hole.node != v && hole.name == c) ok = false;
        for (const auto& nm : named) {
          if (nm.name != c) continue;
          for (std::size_t x : region) ok = ok && !nm.region.count(x);
        }
        if (ok) {
          pick = c;
          break;
        }
      }
      if (!pick) fail("annotation-conflict", "no consistent source name for a reentrant node");
      for (std::size_t h : holders) frags_[h].hole_for(v)->name = *pick;
      named.push_back(Named{*pick, region});
    }
  }

  // Annotation shared by every placeholder of root(q).
  AmType annotation(std::size_t q) {
    if (frags_[q].parent == kNone || !frags_[q].app) return AmType();
    return subtree_type(q);
  }

  // The placeholder a modifier keeps for its head's root is filled by MOD,
  // which wants it unannotated.
  AmType hole_annotation(std::size_t p, AsGraph::NodeId node) {
    const Frag& f = frags_[p];
    if (!f.app && f.parent != kNone && frags_[f.parent].root == node) return AmType();
    return annotation(frag_of_[node]);
  }

  AmType constant_type(std::size_t p) {
    std::vector<std::pair<std::string, AmType>> entries;
    for (const auto& h : frags_[p].holes) entries.emplace_back(h.name, hole_annotation(p, h.node));
    return AmType::from_entries(std::move(entries));
  }

  EdgeOp op_to(std::size_t p) {
    const Frag& f = frags_[p];
    if (f.app) {
      // the shared name of f's root, wherever it is held
      for (std::size_t x = 0; x < frags_.size(); ++x) {
        if (frags_[x].parent == p && !frags_[x].app) continue;
        for (const auto& h : frags_[x].holes)
          if (h.node == f.root) return EdgeOp::apply(h.name);
      }
      fail("annotation-conflict", "no placeholder for an argument");
    }
    return EdgeOp::modify(frags_[p].hole_for(frags_[f.parent].root)->name);
  }

  AmType subtree_type(std::size_t p) {
    if (auto it = types_.find(p); it != types_.end()) return it->second;
    if (!busy_.insert(p).second) fail("annotation-conflict", "cyclic annotation");
    HeadState s = initial_state(constant_type(p));
    for (std::size_t c : frags_[p].children) {
      auto next = attach(s, op_to(c), subtree_type(c));
      if (!next)
        fail("annotation-conflict", op_to(c).str() + " from token " + std::to_string(frags_[p].token) +
                                        " to token " + std::to_string(frags_[c].token));
      s = std::move(*next);
    }
    if (!s.complete()) fail("annotation-conflict", "token " + std::to_string(frags_[p].token) + " keeps pending arguments");
    busy_.erase(p);
    return types_[p] = s.current;
  }

  Decomposition assemble() {
    Decomposition d;
    const std::size_t n = tokens_.size();
    d.tree.resize(n);
    d.tree.tokens = tokens_;
    d.lexical.assign(n, std::nullopt);
    const auto& edges = g_.edges();
    for (std::size_t p = 0; p < frags_.size(); ++p) {
      const Frag& f = frags_[p];
      AsGraph c;
      std::map<AsGraph::NodeId, AsGraph::NodeId> id;
      for (auto u : f.nodes) id[u] = c.add_node(g_.label(u));
      for (std::size_t i : f.internal) c.add_edge(id[edges[i].from], id[edges[i].to], edges[i].label);
      for (const auto& h : f.holes) {
        auto x = c.add_node();
        for (std::size_t i : h.edges) {
          const auto& e = edges[i];
          if (e.from == h.node) c.add_edge(x, id[e.to], e.label);
          else c.add_edge(id[e.from], x, e.label);
        }
        c.set_source(h.name, x, hole_annotation(p, h.node));
      }
      c.set_root(id[f.root]);
      c.validate();
      const std::size_t t = f.token;
      if (auto lex = al_.lexical[t - 1]; lex && id.count(*lex)) d.lexical[t - 1] = id[*lex];
      d.tree.supertags[t - 1] = std::move(c);
      if (f.parent == kNone) {
        d.tree.heads[t - 1] = 0;
        d.tree.labels[t - 1].reset();
      } else {
        d.tree.heads[t - 1] = frags_[f.parent].token;
        d.tree.labels[t - 1] = op_to(p);
      }
    }
    const std::size_t root_token = frags_[root_].token;
    for (std::size_t t = 1; t <= n; ++t) {
      if (d.tree.supertags[t - 1]) continue;
      d.tree.heads[t - 1] = root_token;
      d.tree.labels[t - 1] = EdgeOp::ignore();
    }

    validate_structure(d.tree);
    auto types = check_well_typed(d.tree);
    if (!types) fail("annotation-conflict", "tree is not well-typed");
    if (!(*types)[root_token - 1].is_empty())
      fail("annotation-conflict", "root type " + (*types)[root_token - 1].str());
    AsGraph value = eval(term_from_deptree(d.tree));
    if (!is_isomorphic(value, g_)) fail("eval-mismatch", render_amr(value));
    d.ok = true;
    d.amr = g_;
    return d;
  }

  const AsGraph& g_;
  const Alignment& al_;
  const std::vector<Token>& tokens_;
  const BlobPolicy& policy_;
  std::vector<Frag> frags_;
  std::vector<std::size_t> frag_of_;
  std::vector<std::size_t> order_;
  std::size_t root_ = 0;
  std::map<std::size_t, AmType> types_;
  std::set<std::size_t> busy_;
};

Decomposition attempt(const AsGraph& g, const Alignment& al, const std::vector<Token>& tokens,
                      const BlobPolicy& policy) {
  try {
    return Decomposer(g, al, tokens, policy).run();
  } catch (const Failure& f) {
    Decomposition d;
    d.reason = f.reason;
    d.detail = f.detail;
    return d;
  } catch (const Error& e) {
    Decomposition d;
    d.reason = "annotation-conflict";
    d.detail = e.what();
    return d;
  }
}

// Incoming edges of reentrant nodes, later edges first, whose removal keeps
// the graph connected.
std::vector<AsGraph::Edge> removable(const AsGraph& g) {
  std::vector<int> in(g.node_count(), 0);
  for (const auto& e : g.edges()) ++in[e.to];
  std::vector<AsGraph::Edge> out;
  for (auto it = g.edges().rbegin(); it != g.edges().rend(); ++it) {
    if (in[it->to] < 2) continue;
    AsGraph h = g;
    h.remove_edge(*it);
    if (connected(h)) out.push_back(*it);
  }
  return out;
}

}  // namespace

Decomposition decompose(const AsGraph& amr, const Alignment& alignment, const std::vector<Token>& tokens,
                        const BlobPolicy& policy, std::size_t max_removals) {
  Decomposition first = attempt(amr, alignment, tokens, policy);
  if (first.ok) return first;
  // Reentrancies that defeat the decomposition are dropped one at a time.
  AsGraph g = amr;
  for (std::size_t removed = 0; removed < max_removals; ++removed) {
    auto cands = removable(g);
    if (cands.empty()) break;
    for (const auto& e : cands) {
      AsGraph h = g;
      h.remove_edge(e);
      Decomposition d = attempt(h, alignment, tokens, policy);
      if (d.ok) {
        d.reentrancies_removed = removed + 1;
        return d;
      }
    }
    g.remove_edge(cands.front());
  }
  return first;
}

}  // namespace am
