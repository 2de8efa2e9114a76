#include "am/smatch.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

namespace am {

double SmatchCounts::precision() const {
  return test_total == 0 ? (gold_total == 0 ? 1.0 : 0.0) : static_cast<double>(matched) / test_total;
}

double SmatchCounts::recall() const {
  return gold_total == 0 ? (test_total == 0 ? 1.0 : 0.0) : static_cast<double>(matched) / gold_total;
}

double SmatchCounts::f() const {
  if (test_total == 0 && gold_total == 0) return 1.0;
  if (test_total + gold_total == 0) return 0.0;
  return 2.0 * static_cast<double>(matched) / static_cast<double>(test_total + gold_total);
}

SmatchCounts& SmatchCounts::operator+=(const SmatchCounts& other) {
  matched += other.matched;
  test_total += other.test_total;
  gold_total += other.gold_total;
  return *this;
}

namespace {

constexpr int kNone = -1;

struct Triples {
  std::vector<std::string> instance;  // per variable; empty for unlabeled
  std::set<std::tuple<int, std::string, std::string>> attributes;  // var, role, value
  std::set<std::tuple<int, int, std::string>> relations;
  std::size_t total = 0;
};

Triples triples_of(const AsGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<char> has_out(n, 0);
  for (const auto& e : g.edges()) has_out[e.from] = 1;
  auto is_constant = [&](AsGraph::NodeId v) {
    const auto& l = g.label(v);
    return l && is_constant_label(*l) && !has_out[v] && !(g.has_root() && g.root() == v);
  };
  std::vector<int> var(n, kNone);
  Triples t;
  for (AsGraph::NodeId v = 0; v < n; ++v) {
    if (is_constant(v)) continue;
    var[v] = static_cast<int>(t.instance.size());
    t.instance.push_back(g.label(v).value_or(""));
  }
  for (const auto& e : g.edges()) {
    if (var[e.to] == kNone)
      t.attributes.emplace(var[e.from], e.label, *g.label(e.to));
    else
      t.relations.emplace(var[e.from], var[e.to], e.label);
  }
  for (const auto& l : t.instance) t.total += !l.empty();
  t.total += t.attributes.size() + t.relations.size();
  return t;
}

class Matcher {
 public:
  Matcher(const Triples& a, const Triples& b) : a_(a), b_(b) {
    // Per (a-variable, b-variable) the triples that match regardless of the
    // rest of the mapping.
    const std::size_t na = a.instance.size(), nb = b.instance.size();
    unary_.assign(na, std::vector<int>(nb, 0));
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        unary_[i][j] = !a.instance[i].empty() && a.instance[i] == b.instance[j];
    for (const auto& [v, role, value] : a.attributes)
      for (const auto& [w, role2, value2] : b.attributes)
        if (role == role2 && value == value2) ++unary_[v][w];
  }

  std::size_t score(const std::vector<int>& m) const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] != kNone) s += unary_[i][m[i]];
    for (const auto& [x, y, role] : a_.relations)
      if (m[x] != kNone && m[y] != kNone && b_.relations.count({m[x], m[y], role})) ++s;
    return s;
  }

  // Steepest ascent over reassignments and swaps; ties keep the first move.
  std::size_t climb(std::vector<int>& m) const {
    const int nb = static_cast<int>(b_.instance.size());
    std::size_t cur = score(m);
    for (;;) {
      std::vector<char> used(nb, 0);
      for (int x : m)
        if (x != kNone) used[x] = 1;
      std::size_t best = cur;
      std::vector<int> best_m;
      for (std::size_t i = 0; i < m.size(); ++i) {
        for (int j = kNone; j < nb; ++j) {
          if (j == m[i] || (j != kNone && used[j])) continue;
          int old = m[i];
          m[i] = j;
          std::size_t s = score(m);
          if (s > best) {
            best = s;
            best_m = m;
          }
          m[i] = old;
        }
        for (std::size_t k = i + 1; k < m.size(); ++k) {
          if (m[i] == m[k]) continue;
          std::swap(m[i], m[k]);
          std::size_t s = score(m);
          if (s > best) {
            best = s;
            best_m = m;
          }
          std::swap(m[i], m[k]);
        }
      }
      if (best_m.empty()) return cur;
      m = std::move(best_m);
      cur = best;
    }
  }

  std::vector<int> smart_start() const {
    std::vector<int> m(a_.instance.size(), kNone);
    std::vector<char> used(b_.instance.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      int best = kNone, best_s = 0;
      for (std::size_t j = 0; j < used.size(); ++j)
        if (!used[j] && unary_[i][j] > best_s) {
          best = static_cast<int>(j);
          best_s = unary_[i][j];
        }
      if (best != kNone) {
        m[i] = best;
        used[best] = 1;
      }
    }
    return m;
  }

  std::vector<int> random_start(std::mt19937_64& rng) const {
    std::vector<int> pool(b_.instance.size());
    for (std::size_t j = 0; j < pool.size(); ++j) pool[j] = static_cast<int>(j);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int> m(a_.instance.size(), kNone);
    for (std::size_t i = 0; i < m.size() && i < pool.size(); ++i) m[i] = pool[i];
    return m;
  }

 private:
  const Triples& a_;
  const Triples& b_;
  std::vector<std::vector<int>> unary_;
};

}  // namespace

SmatchCounts smatch(const AsGraph& test, const AsGraph& gold, const SmatchOptions& options) {
  const Triples a = triples_of(test);
  const Triples b = triples_of(gold);
  SmatchCounts c;
  c.test_total = a.total;
  c.gold_total = b.total;
  Matcher matcher(a, b);
  std::mt19937_64 rng(options.seed);
  std::vector<int> m = matcher.smart_start();
  std::size_t best = matcher.climb(m);
  for (std::size_t r = 0; r < options.restarts && best < std::min(a.total, b.total); ++r) {
    m = matcher.random_start(rng);
    best = std::max(best, matcher.climb(m));
  }
  c.matched = best;
  return c;
}

SmatchCounts smatch_corpus(const std::vector<AsGraph>& test, const std::vector<AsGraph>& gold,
                           const SmatchOptions& options) {
  if (test.size() != gold.size()) throw std::invalid_argument("smatch_corpus: size mismatch");
  SmatchCounts total;
  for (std::size_t i = 0; i < test.size(); ++i) total += smatch(test[i], gold[i], options);
  return total;
}

}  // namespace am
