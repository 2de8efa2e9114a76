#include "am/asgraph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_map>

#include "am/error.hpp"

namespace am {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t fnv(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
  return h;
}

std::string graph_type_str(const AsGraph& g) { return type_of(g).str(); }

}  // namespace

AsGraph::NodeId AsGraph::add_node(std::optional<std::string> label) {
  labels_.push_back(std::move(label));
  return static_cast<NodeId>(labels_.size() - 1);
}

void AsGraph::add_edge(NodeId from, NodeId to, std::string label) {
  if (from >= node_count() || to >= node_count()) throw GraphError("edge endpoint out of range");
  Edge e{from, to, std::move(label)};
  if (std::find(edges_.begin(), edges_.end(), e) != edges_.end())
    throw GraphError("duplicate edge :" + e.label);
  edges_.push_back(std::move(e));
}

bool AsGraph::remove_edge(const Edge& edge) {
  auto it = std::find(edges_.begin(), edges_.end(), edge);
  if (it == edges_.end()) return false;
  edges_.erase(it);
  return true;
}

void AsGraph::set_root(NodeId node) {
  if (node >= node_count()) throw GraphError("root out of range");
  root_ = node;
  has_root_ = true;
}

void AsGraph::set_label(NodeId node, std::optional<std::string> label) {
  labels_.at(node) = std::move(label);
}

void AsGraph::set_source(const std::string& name, NodeId node, AmType annotation) {
  if (!is_valid_source_name(name)) throw GraphError("invalid source name '" + name + "'");
  if (node >= node_count()) throw GraphError("source node out of range");
  if (annotation.is_bottom()) throw GraphError("source '" + name + "' annotated with bottom");
  if (sources_.count(name)) throw GraphError("duplicate source name '" + name + "'");
  for (const auto& [other, src] : sources_)
    if (src.node == node)
      throw GraphError("node carries two sources '" + other + "' and '" + name + "'");
  sources_.emplace(name, Source{node, annotation});
}

void AsGraph::remove_source(const std::string& name) { sources_.erase(name); }

std::optional<AsGraph::NodeId> AsGraph::source_node(std::string_view name) const {
  auto it = sources_.find(std::string(name));
  if (it == sources_.end()) return std::nullopt;
  return it->second.node;
}

std::optional<std::string> AsGraph::source_at(NodeId node) const {
  for (const auto& [name, src] : sources_)
    if (src.node == node) return name;
  return std::nullopt;
}

void AsGraph::prune_disconnected() {
  if (!has_root_) return;
  std::vector<std::vector<NodeId>> adj(node_count());
  for (const auto& e : edges_) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  std::vector<char> seen(node_count(), 0);
  std::vector<NodeId> stack{root_};
  seen[root_] = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  std::vector<NodeId> remap(node_count(), 0);
  std::vector<std::optional<std::string>> labels;
  for (NodeId u = 0; u < node_count(); ++u)
    if (seen[u]) {
      remap[u] = static_cast<NodeId>(labels.size());
      labels.push_back(labels_[u]);
    }
  std::vector<Edge> edges;
  for (auto& e : edges_)
    if (seen[e.from]) edges.push_back(Edge{remap[e.from], remap[e.to], e.label});
  std::map<std::string, Source> sources;
  for (auto& [name, src] : sources_)
    if (seen[src.node]) sources.emplace(name, Source{remap[src.node], src.annotation});
  labels_ = std::move(labels);
  edges_ = std::move(edges);
  sources_ = std::move(sources);
  root_ = remap[root_];
}

void AsGraph::validate() const {
  if (!has_root_ || root_ >= node_count()) throw GraphError("graph has no root");
  std::set<NodeId> used;
  for (const auto& [name, src] : sources_) {
    if (src.node >= node_count()) throw GraphError("source node out of range");
    if (src.node == root_) throw GraphError("root cannot be source '" + name + "'");
    if (!used.insert(src.node).second) throw GraphError("node carries two sources");
    if (src.annotation.is_bottom()) throw GraphError("bottom annotation");
  }
  std::set<Edge> seen_edges;
  for (const auto& e : edges_)
    if (!seen_edges.insert(e).second) throw GraphError("duplicate edge :" + e.label);
  std::vector<std::vector<NodeId>> adj(node_count());
  for (const auto& e : edges_) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  std::vector<char> seen(node_count(), 0);
  std::vector<NodeId> stack{root_};
  seen[root_] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
  }
  if (count != node_count()) throw GraphError("graph is disconnected");
}

AmType type_of(const AsGraph& g) {
  std::vector<AmType::Entry> entries;
  entries.reserve(g.sources().size());
  for (const auto& [name, src] : g.sources()) entries.emplace_back(name, src.annotation);
  return AmType::from_entries(std::move(entries));
}

namespace {

// Copies `part` into `out`, redirecting nodes listed in `fuse` onto existing
// nodes of `out` and creating fresh ones for the rest.
std::vector<AsGraph::NodeId> merge_into(
    AsGraph& out, const AsGraph& part,
    const std::unordered_map<AsGraph::NodeId, AsGraph::NodeId>& fuse) {
  std::vector<AsGraph::NodeId> map(part.node_count());
  for (AsGraph::NodeId u = 0; u < part.node_count(); ++u) {
    auto it = fuse.find(u);
    if (it == fuse.end()) {
      map[u] = out.add_node(part.label(u));
      continue;
    }
    map[u] = it->second;
    const auto& mine = out.label(it->second);
    const auto& theirs = part.label(u);
    if (mine && theirs)
      throw OperationError(OperationError::Kind::kLabelConflict,
                           "cannot unify nodes labeled '" + *mine + "' and '" + *theirs + "'");
    if (theirs) out.set_label(it->second, theirs);
  }
  std::set<AsGraph::Edge> present(out.edges().begin(), out.edges().end());
  for (const auto& e : part.edges()) {
    AsGraph::Edge m{map[e.from], map[e.to], e.label};
    if (present.insert(m).second) out.add_edge(m.from, m.to, m.label);
  }
  return map;
}

AsGraph copy_without_source(const AsGraph& g, std::string_view drop) {
  AsGraph out;
  for (AsGraph::NodeId u = 0; u < g.node_count(); ++u) out.add_node(g.label(u));
  for (const auto& e : g.edges()) out.add_edge(e.from, e.to, e.label);
  out.set_root(g.root());
  for (const auto& [name, src] : g.sources())
    if (name != drop) out.set_source(name, src.node, src.annotation);
  return out;
}

}  // namespace

AsGraph apply(const AsGraph& gp, std::string_view a, const AsGraph& ga) {
  using K = OperationError::Kind;
  auto a_node = gp.source_node(a);
  if (!a_node)
    throw OperationError(K::kMissingSource, "head has no source '" + std::string(a) + "'");
  const AmType& ann = gp.sources().find(std::string(a))->second.annotation;
  AmType arg_type = type_of(ga);
  if (ann != arg_type)
    throw OperationError(K::kAnnotationMismatch, "source '" + std::string(a) + "' expects " +
                                                     ann.str() + ", argument has type " +
                                                     arg_type.str());
  for (const auto& [name, src] : gp.sources()) {
    if (name != a && src.annotation.mentions(a))
      throw OperationError(K::kRequestedSource, "source '" + name + "' still requests '" +
                                                    std::string(a) + "'");
  }
  for (const auto& [name, src] : ga.sources()) {
    if (name == a) continue;
    auto it = gp.sources().find(name);
    if (it != gp.sources().end() && it->second.annotation != src.annotation)
      throw OperationError(K::kAnnotationMismatch,
                           "shared source '" + name + "' annotated " + it->second.annotation.str() +
                               " vs " + src.annotation.str());
  }

  AsGraph out = copy_without_source(gp, a);
  std::unordered_map<AsGraph::NodeId, AsGraph::NodeId> fuse;
  fuse[ga.root()] = *a_node;
  for (const auto& [name, src] : ga.sources()) {
    if (name == a) continue;
    if (auto p = out.source_node(name)) fuse[src.node] = *p;
  }
  auto map = merge_into(out, ga, fuse);
  for (const auto& [name, src] : ga.sources())
    if (!out.source_node(name)) out.set_source(name, map[src.node], src.annotation);
  return out;
}

AsGraph modify(const AsGraph& gh, std::string_view a, const AsGraph& gm) {
  using K = OperationError::Kind;
  auto it = gm.sources().find(std::string(a));
  if (it == gm.sources().end())
    throw OperationError(K::kMissingSource, "modifier has no source '" + std::string(a) + "'");
  if (!it->second.annotation.is_empty())
    throw OperationError(K::kModifierAnnotation, "modifier source '" + std::string(a) +
                                                     "' carries annotation " +
                                                     it->second.annotation.str());
  for (const auto& [name, src] : gm.sources()) {
    if (name == a) continue;
    auto h = gh.sources().find(name);
    if (h == gh.sources().end())
      throw OperationError(K::kExtraModifierSource,
                           "modifier source '" + name + "' is not a source of the head");
    if (h->second.annotation != src.annotation)
      throw OperationError(K::kAnnotationMismatch, "source '" + name + "' annotated " +
                                                       h->second.annotation.str() + " vs " +
                                                       src.annotation.str());
  }

  AsGraph out = copy_without_source(gh, "");
  std::unordered_map<AsGraph::NodeId, AsGraph::NodeId> fuse;
  fuse[it->second.node] = gh.root();
  for (const auto& [name, src] : gm.sources())
    if (name != a) fuse[src.node] = *gh.source_node(name);
  merge_into(out, gm, fuse);
  return out;
}

std::vector<std::uint64_t> node_colors(const AsGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::uint64_t> color(n);
  for (AsGraph::NodeId u = 0; u < n; ++u) {
    std::uint64_t h = kFnvOffset;
    h = g.label(u) ? fnv(fnv(h, "L"), *g.label(u)) : fnv(h, "U");
    if (g.has_root() && g.root() == u) h = fnv(h, "<root>");
    color[u] = h;
  }
  for (const auto& [name, src] : g.sources())
    color[src.node] = fnv(fnv(fnv(color[src.node], "<src>"), name), src.annotation.str());

  std::vector<std::uint64_t> edge_hash(g.edges().size());
  for (std::size_t i = 0; i < g.edges().size(); ++i) edge_hash[i] = fnv(kFnvOffset, g.edges()[i].label);

  auto distinct = [](std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
  };
  std::size_t classes = distinct(color);
  std::vector<std::vector<std::uint64_t>> sig(n);
  for (std::size_t round = 0; round < n; ++round) {
    for (auto& s : sig) s.clear();
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      const auto& e = g.edges()[i];
      sig[e.from].push_back(fnv(fnv(edge_hash[i], "out"), color[e.to]));
      sig[e.to].push_back(fnv(fnv(edge_hash[i], "in"), color[e.from]));
    }
    std::vector<std::uint64_t> next(n);
    for (std::size_t u = 0; u < n; ++u) {
      std::sort(sig[u].begin(), sig[u].end());
      std::uint64_t h = fnv(kFnvOffset, color[u]);
      for (auto x : sig[u]) h = fnv(h, x);
      next[u] = h;
    }
    std::size_t next_classes = distinct(next);
    color.swap(next);
    if (next_classes == classes) break;
    classes = next_classes;
  }
  return color;
}

bool is_isomorphic(const AsGraph& g1, const AsGraph& g2) {
  const std::size_t n = g1.node_count();
  if (n != g2.node_count() || g1.edges().size() != g2.edges().size()) return false;
  if (g1.sources().size() != g2.sources().size()) return false;
  if (graph_type_str(g1) != graph_type_str(g2)) return false;
  auto c1 = node_colors(g1);
  auto c2 = node_colors(g2);
  {
    auto s1 = c1, s2 = c2;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    if (s1 != s2) return false;
  }
  if (n == 0) return true;

  using Key = std::pair<AsGraph::NodeId, AsGraph::NodeId>;
  auto adjacency = [](const AsGraph& g) {
    std::map<Key, std::vector<std::string>> m;
    for (const auto& e : g.edges()) m[{e.from, e.to}].push_back(e.label);
    for (auto& [k, v] : m) std::sort(v.begin(), v.end());
    return m;
  };
  auto a1 = adjacency(g1);
  auto a2 = adjacency(g2);
  static const std::vector<std::string> kNone;
  auto lookup = [](const std::map<Key, std::vector<std::string>>& m, AsGraph::NodeId u,
                   AsGraph::NodeId v) -> const std::vector<std::string>& {
    auto it = m.find({u, v});
    return it == m.end() ? kNone : it->second;
  };

  // Visit g1 nodes in BFS order so each new node is adjacent to a mapped one.
  std::vector<std::vector<AsGraph::NodeId>> nb(n);
  for (const auto& e : g1.edges()) {
    nb[e.from].push_back(e.to);
    nb[e.to].push_back(e.from);
  }
  std::vector<AsGraph::NodeId> order;
  std::vector<char> seen(n, 0);
  for (AsGraph::NodeId start = g1.root(); order.size() < n;) {
    std::queue<AsGraph::NodeId> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      order.push_back(u);
      for (auto v : nb[u])
        if (!seen[v]) {
          seen[v] = 1;
          q.push(v);
        }
    }
    for (start = 0; start < n && seen[start]; ++start) {
    }
    if (start == n) break;
  }

  std::vector<long> f(n, -1);
  std::vector<char> used(n, 0);
  std::function<bool(std::size_t)> extend = [&](std::size_t depth) -> bool {
    if (depth == n) return true;
    AsGraph::NodeId u = order[depth];
    for (AsGraph::NodeId v = 0; v < n; ++v) {
      if (used[v] || c1[u] != c2[v]) continue;
      if (lookup(a1, u, u) != lookup(a2, v, v)) continue;
      bool ok = true;
      for (std::size_t d = 0; d < depth && ok; ++d) {
        AsGraph::NodeId w = order[d];
        auto fw = static_cast<AsGraph::NodeId>(f[w]);
        ok = lookup(a1, u, w) == lookup(a2, v, fw) && lookup(a1, w, u) == lookup(a2, fw, v);
      }
      if (!ok) continue;
      f[u] = v;
      used[v] = 1;
      if (extend(depth + 1)) return true;
      used[v] = 0;
      f[u] = -1;
    }
    return false;
  };
  return extend(0);
}

}  // namespace am
