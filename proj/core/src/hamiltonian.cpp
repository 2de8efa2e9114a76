// Reduction from Hamiltonian path (ending at node n) to well-typed decoding.
//
// Nodes 1..n-1 get a fragment of type (s): one labeled node with an ARG0
// edge to an s-source. Node n gets a single node of type (). Every head
// then needs exactly one APP_s dependent, so the only complete trees are
// paths ending at n, scored by how many of their edges are arcs of the
// digraph. MOD_s, IGNORE and bottom are forbidden: MOD_s would let node n
// modify an (s) token and break the path shape.

#include <algorithm>
#include <sstream>

#include "decode_internal.hpp"

namespace am {

Digraph read_digraph(std::string_view text) {
  Digraph g;
  std::optional<std::size_t> fixed_n;
  std::istringstream in{std::string(text)};
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b) || (ls >> extra)) throw FormatError("expected \"i k\"", no);
    try {
      std::size_t pos = 0;
      if (a == "n") {
        fixed_n = std::stoul(b, &pos);
        if (pos != b.size()) throw std::invalid_argument(b);
        continue;
      }
      std::size_t i = std::stoul(a, &pos);
      if (pos != a.size()) throw std::invalid_argument(a);
      std::size_t k = std::stoul(b, &pos);
      if (pos != b.size()) throw std::invalid_argument(b);
      if (i == 0 || k == 0) throw FormatError("nodes are numbered from 1", no);
      g.arcs.emplace_back(i, k);
      g.n = std::max({g.n, i, k});
    } catch (const std::logic_error&) {
      throw FormatError("not a number in \"" + line + "\"", no);
    }
  }
  if (fixed_n) {
    if (*fixed_n < g.n) throw FormatError("arc index exceeds n", 0);
    g.n = *fixed_n;
  }
  return g;
}

ScoreTable build_hamiltonian_instance(const Digraph& g) {
  const std::size_t n = g.n;
  if (n < 2) throw DecodeError("Hamiltonian instance needs at least two nodes");
  std::vector<Token> tokens;
  for (std::size_t i = 1; i <= n; ++i) tokens.push_back(Token{std::to_string(i), "V"});
  ScoreTable table(std::move(tokens));

  static const AsGraph inner = parse_asgraph("(v<root> / node :ARG0 (x<s>))");
  static const AsGraph last = parse_asgraph("(v<root> / node)");
  for (std::size_t i = 1; i <= n; ++i) {
    AsGraph frag = i < n ? inner : last;
    frag.set_label(frag.root(), "v" + std::to_string(i));
    table.add_candidate(i, SupertagCandidate::of(std::move(frag), 0.0));
    table.add_candidate(i, SupertagCandidate::bottom(kNegInf));
  }
  table.edge_default = 0.0;
  for (const auto& [a, b] : g.arcs) {
    if (a < 1 || a > n || b < 1 || b > n || a == b) throw DecodeError("arc out of range");
    table.set_edge(a, b, 1.0);
  }
  table.label_default = kNegInf;
  const EdgeOp app = EdgeOp::apply("s");
  for (std::size_t h = 1; h <= n; ++h)
    for (std::size_t d = 1; d <= n; ++d)
      if (h != d) table.set_label(h, d, app, 0.0);
  return table;
}

bool has_hamiltonian_path_to_last(const Digraph& g) {
  const std::size_t n = g.n;
  if (n == 0) return false;
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& [a, b] : g.arcs) adj[a - 1][b - 1] = 1;
  // reach[mask] : bitset of end nodes of simple paths visiting exactly mask
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<std::uint32_t> reach(full + 1, 0);
  for (std::size_t v = 0; v < n; ++v) reach[std::size_t{1} << v] |= 1u << v;
  for (std::size_t mask = 1; mask <= full; ++mask)
    for (std::size_t v = 0; v < n; ++v) {
      if (!(reach[mask] >> v & 1)) continue;
      for (std::size_t w = 0; w < n; ++w)
        if (adj[v][w] && !(mask >> w & 1)) reach[mask | (std::size_t{1} << w)] |= 1u << w;
    }
  return reach[full] >> (n - 1) & 1;
}

HamiltonianVerdict decide_hamiltonian(const Digraph& g) {
  ScoreTable table = build_hamiltonian_instance(g);
  DecodeOptions opts;
  opts.k = 1;
  opts.guard_n = std::max<std::size_t>(opts.guard_n, g.n);
  HamiltonianVerdict v;
  v.result = exact_decode(table, opts);
  v.score = v.result.score;
  v.yes = v.result.status == DecodeStatus::kExactGoal &&
          v.score == static_cast<double>(g.n - 1);
  return v;
}

}  // namespace am
