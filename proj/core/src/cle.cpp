// Chu-Liu-Edmonds maximum arborescence, run once per choice of the single
// token attached to the virtual root.

#include <algorithm>

#include "am/decode.hpp"
#include "am/error.hpp"

namespace am {

namespace {

using Matrix = std::vector<std::vector<double>>;

// Maximum arborescence of the dense graph `w` (w[h][d], -inf = no edge)
// rooted at `root`. Returns parent per node (root gets -1), or an empty
// vector if some node cannot be reached.
std::vector<int> chu_liu_edmonds(const Matrix& w, int root) {
  const int m = static_cast<int>(w.size());
  std::vector<int> par(m, -1);
  for (int v = 0; v < m; ++v) {
    if (v == root) continue;
    for (int h = 0; h < m; ++h) {
      if (h == v || w[h][v] == kNegInf) continue;
      if (par[v] < 0 || w[h][v] > w[par[v]][v]) par[v] = h;
    }
    if (par[v] < 0) return {};
  }

  // Look for a cycle among the chosen parents.
  std::vector<int> color(m, 0);
  std::vector<int> cycle;
  for (int s = 0; s < m && cycle.empty(); ++s) {
    if (color[s]) continue;
    std::vector<int> path;
    int v = s;
    while (v >= 0 && color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = par[v];
    }
    if (v >= 0 && color[v] == 1) {
      auto it = std::find(path.begin(), path.end(), v);
      cycle.assign(it, path.end());
    }
    for (int u : path) color[u] = 2;
  }
  if (cycle.empty()) return par;

  std::vector<char> in_cycle(m, 0);
  for (int v : cycle) in_cycle[v] = 1;
  // New numbering: non-cycle nodes keep relative order, the cycle becomes
  // the last node.
  std::vector<int> index(m, -1), back;
  for (int v = 0; v < m; ++v)
    if (!in_cycle[v]) {
      index[v] = static_cast<int>(back.size());
      back.push_back(v);
    }
  const int c = static_cast<int>(back.size());
  const int m2 = c + 1;
  Matrix w2(m2, std::vector<double>(m2, kNegInf));
  std::vector<int> enter_at(m2, -1);   // cycle node entered from outside node
  std::vector<int> leave_from(m2, -1); // cycle node an outgoing edge starts at
  for (int u = 0; u < m; ++u) {
    for (int v = 0; v < m; ++v) {
      if (u == v || w[u][v] == kNegInf) continue;
      if (!in_cycle[u] && !in_cycle[v]) {
        w2[index[u]][index[v]] = w[u][v];
      } else if (!in_cycle[u] && in_cycle[v]) {
        double s = w[u][v] - w[par[v]][v];
        if (s > w2[index[u]][c]) {
          w2[index[u]][c] = s;
          enter_at[index[u]] = v;
        }
      } else if (in_cycle[u] && !in_cycle[v]) {
        if (w[u][v] > w2[c][index[v]]) {
          w2[c][index[v]] = w[u][v];
          leave_from[index[v]] = u;
        }
      }
    }
  }
  int root2 = in_cycle[root] ? c : index[root];
  auto par2 = chu_liu_edmonds(w2, root2);
  if (par2.empty()) return {};

  std::vector<int> out(m, -1);
  for (int v = 0; v < m; ++v)
    if (in_cycle[v]) out[v] = par[v];
  for (int v2 = 0; v2 < c; ++v2) {
    int v = back[v2];
    if (par2[v2] < 0) continue;
    out[v] = par2[v2] == c ? leave_from[v2] : back[par2[v2]];
  }
  if (par2[c] >= 0) {
    int u = back[par2[c]];
    out[enter_at[par2[c]]] = u;
  }
  out[root] = -1;
  return out;
}

}  // namespace

Skeleton cle_arborescence(const std::vector<std::vector<double>>& scores) {
  const std::size_t n = scores.size() - 1;
  if (n == 0) throw DecodeError("empty sentence");
  Matrix w(n, std::vector<double>(n, kNegInf));
  for (std::size_t h = 1; h <= n; ++h)
    for (std::size_t d = 1; d <= n; ++d)
      if (h != d) w[h - 1][d - 1] = scores[h][d];

  Skeleton best;
  double best_score = kNegInf;
  for (std::size_t r = 1; r <= n; ++r) {
    if (scores[0][r] == kNegInf) continue;
    auto par = chu_liu_edmonds(w, static_cast<int>(r - 1));
    if (par.empty()) continue;
    double total = scores[0][r];
    Skeleton heads(n, 0);
    for (std::size_t d = 1; d <= n; ++d) {
      if (d == r) continue;
      heads[d - 1] = static_cast<std::size_t>(par[d - 1]) + 1;
      total += scores[heads[d - 1]][d];
    }
    if (best.empty() || total > best_score) {
      best = heads;
      best_score = total;
    }
  }
  if (best.empty()) throw DecodeError("no arborescence over finite edges");
  return best;
}

Skeleton cle_arborescence(const ScoreTable& table) {
  const std::size_t n = table.size();
  std::vector<std::vector<double>> s(n + 1, std::vector<double>(n + 1, kNegInf));
  for (std::size_t h = 0; h <= n; ++h)
    for (std::size_t d = 1; d <= n; ++d)
      if (h != d) s[h][d] = table.edge(h, d);
  return cle_arborescence(s);
}

}  // namespace am
