#include "am/aligner.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace am {

std::vector<AsGraph::NodeId> Alignment::fragment(std::size_t t) const {
  std::vector<AsGraph::NodeId> out;
  for (AsGraph::NodeId u = 0; u < node_token.size(); ++u)
    if (node_token[u] == t) out.push_back(u);
  return out;
}

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

bool matches(const std::string& pattern, const std::optional<std::string>& label) {
  if (pattern == "*") return true;
  return label && (*label == pattern || label_base(*label) == pattern);
}

}  // namespace

std::string label_base(const std::string& label) {
  if (label.size() >= 2 && label.front() == '"' && label.back() == '"') return label.substr(1, label.size() - 2);
  std::size_t n = label.size();
  if (n > 3 && label[n - 3] == '-' && std::isdigit(static_cast<unsigned char>(label[n - 2])) &&
      std::isdigit(static_cast<unsigned char>(label[n - 1])))
    return label.substr(0, n - 3);
  return label;
}

std::string stem(const std::string& word) {
  std::string w = lower(word);
  static const std::pair<const char*, const char*> suffixes[] = {
      {"ingly", ""}, {"edly", ""}, {"ings", ""}, {"ies", "y"}, {"ied", "y"}, {"ing", ""},
      {"ers", ""},   {"er", ""},   {"ed", ""},   {"es", ""},  {"ly", ""},  {"s", ""}};
  for (const auto& [suf, rep] : suffixes) {
    std::string s = suf, r = rep;
    if (ends_with(w, s) && w.size() - s.size() + r.size() >= 3) {
      w = w.substr(0, w.size() - s.size()) + rep;
      break;
    }
  }
  if (w.size() > 3 && w.back() == 'e') w.pop_back();
  return w;
}

double lexical_similarity(const std::string& form, const std::string& label, const AlignerWeights& w) {
  const std::string f = lower(form);
  for (const auto& r : w.rules)
    if (r.word == f && r.label == label) return r.score;
  if (is_constant_label(label) && label.front() != '"') return form == label ? w.exact : 0.0;
  const std::string base = lower(label_base(label));
  if (base.empty()) return 0.0;
  if (form == label || f == base) return w.exact;
  if (stem(f) == stem(base)) return w.stem;
  std::size_t p = 0;
  while (p < f.size() && p < base.size() && f[p] == base[p]) ++p;
  if (p >= w.min_prefix && 2 * p >= std::min(f.size(), base.size()) + 1) return w.prefix;
  return 0.0;
}

std::vector<AsGraph::NodeId> fragment_root_candidates(const AsGraph& amr,
                                                      const std::vector<std::size_t>& node_token,
                                                      std::size_t t, const BlobPolicy& policy) {
  std::set<AsGraph::NodeId> attach;
  auto in = [&](AsGraph::NodeId u) { return node_token[u] == t; };
  if (amr.has_root() && in(amr.root())) attach.insert(amr.root());
  for (const auto& e : amr.edges()) {
    bool src_owned = policy.owner(e.label) == Owner::kSource;
    AsGraph::NodeId owner = src_owned ? e.from : e.to;
    AsGraph::NodeId other = src_owned ? e.to : e.from;
    if (in(other) && !in(owner)) attach.insert(other);
  }
  if (!attach.empty()) return {attach.begin(), attach.end()};
  std::vector<char> has_in(amr.node_count(), 0);
  for (const auto& e : amr.edges())
    if (in(e.from) && in(e.to)) has_in[e.to] = 1;
  std::vector<AsGraph::NodeId> tops;
  for (AsGraph::NodeId u = 0; u < amr.node_count(); ++u)
    if (in(u) && !has_in[u]) tops.push_back(u);
  return tops;
}

namespace {

class Aligner {
 public:
  Aligner(const AsGraph& g, const std::vector<Token>& tokens, const PipelineConfig& c)
      : g_(g), tokens_(tokens), w_(c.aligner), policy_(c.policy) {
    a_.node_token.assign(g.node_count(), 0);
    a_.lexical.assign(tokens.size(), std::nullopt);
    adj_.resize(g.node_count());
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      adj_[g.edges()[i].from].push_back(i);
      adj_[g.edges()[i].to].push_back(i);
    }
    base_.assign(tokens.size(), std::vector<double>(g.node_count(), 0.0));
    for (std::size_t t = 0; t < tokens.size(); ++t)
      for (AsGraph::NodeId u = 0; u < g.node_count(); ++u)
        if (g.label(u)) base_[t][u] = lexical_similarity(tokens[t].form, *g.label(u), w_);
  }

  Alignment run() {
    for (;;) {
      Action best;
      consider_lexical(best);
      consider_extensions(best);
      if (!best.valid) break;
      a_.node_token[best.node] = best.token;
      if (best.lexical) a_.lexical[best.token - 1] = best.node;
    }
    leftovers();
    for (AsGraph::NodeId u = 0; u < g_.node_count(); ++u)
      if (a_.node_token[u] == 0) a_.unaligned.push_back(u);
    return std::move(a_);
  }

 private:
  struct Action {
    bool valid = false;
    double score = 0.0;
    std::size_t token = 0;
    AsGraph::NodeId node = 0;
    bool lexical = false;
  };

  static void offer(Action& best, const Action& a) {
    if (!best.valid || a.score > best.score + 1e-12 ||
        (std::abs(a.score - best.score) <= 1e-12 &&
         std::tie(a.token, a.node) < std::tie(best.token, best.node)))
      best = a;
  }

  bool single_root_with(std::size_t t, AsGraph::NodeId v) {
    std::size_t old = a_.node_token[v];
    a_.node_token[v] = t;
    auto c = fragment_root_candidates(g_, a_.node_token, t, policy_);
    a_.node_token[v] = old;
    return c.size() == 1;
  }

  void consider_lexical(Action& best) {
    const std::size_t n = tokens_.size();
    for (std::size_t t = 0; t < n; ++t) {
      if (a_.lexical[t]) continue;
      for (AsGraph::NodeId v = 0; v < g_.node_count(); ++v) {
        double s = base_[t][v];
        if (s <= 0.0 || a_.node_token[v]) continue;
        // Evidence from the neighbourhood and competition for the same
        // token or node.
        bool near = false;
        for (std::size_t ei : adj_[v]) {
          const auto& e = g_.edges()[ei];
          AsGraph::NodeId u = e.from == v ? e.to : e.from;
          std::size_t tu = a_.node_token[u];
          if (tu && tu != t + 1 && (tu > t + 1 ? tu - t - 1 : t + 1 - tu) <= w_.neighbour_window) near = true;
        }
        if (near) s += w_.neighbour_bonus;
        std::size_t rivals = 0;
        for (std::size_t t2 = 0; t2 < n; ++t2)
          if (t2 != t && !a_.lexical[t2] && base_[t2][v] > 0.0) ++rivals;
        for (AsGraph::NodeId v2 = 0; v2 < g_.node_count(); ++v2)
          if (v2 != v && !a_.node_token[v2] && base_[t][v2] > 0.0) ++rivals;
        s -= w_.conflict_penalty * static_cast<double>(rivals);
        offer(best, Action{true, s, t + 1, v, true});
      }
    }
  }

  double extend_score(const AsGraph::Edge& e, AsGraph::NodeId from, AsGraph::NodeId to) const {
    bool outgoing = e.from == from;
    double s = 0.0;
    for (const auto& r : w_.extend) {
      if (r.outgoing != outgoing) continue;
      if (r.edge != "*" && r.edge != e.label) continue;
      if (!matches(r.from, g_.label(from)) || !matches(r.to, g_.label(to))) continue;
      s = std::max(s, r.score);
    }
    // Constant leaves go with the node they hang off.
    const auto& l = g_.label(to);
    if (outgoing && l && is_constant_label(*l) && adj_[to].size() == 1) s = std::max(s, w_.extend_constant);
    return s;
  }

  void consider_extensions(Action& best) {
    for (AsGraph::NodeId u = 0; u < g_.node_count(); ++u) {
      std::size_t t = a_.node_token[u];
      if (!t) continue;
      for (std::size_t ei : adj_[u]) {
        const auto& e = g_.edges()[ei];
        AsGraph::NodeId v = e.from == u ? e.to : e.from;
        if (a_.node_token[v]) continue;
        double s = extend_score(e, u, v);
        if (s <= 0.0) continue;
        std::set<std::size_t> rivals;
        for (std::size_t ej : adj_[v]) {
          const auto& f = g_.edges()[ej];
          AsGraph::NodeId x = f.from == v ? f.to : f.from;
          if (a_.node_token[x] && a_.node_token[x] != t) rivals.insert(a_.node_token[x]);
        }
        s -= w_.conflict_penalty * static_cast<double>(rivals.size());
        if (best.valid && s < best.score) continue;
        if (!single_root_with(t, v)) continue;
        offer(best, Action{true, s, t, v, false});
      }
    }
  }

  // Unaligned nodes join the fragment of an aligned neighbour, preferring
  // the neighbour whose token is closest to the other aligned neighbours.
  void leftovers() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (AsGraph::NodeId v = 0; v < g_.node_count(); ++v) {
        if (a_.node_token[v]) continue;
        std::vector<std::size_t> near;
        for (std::size_t ei : adj_[v]) {
          const auto& e = g_.edges()[ei];
          AsGraph::NodeId u = e.from == v ? e.to : e.from;
          if (a_.node_token[u]) near.push_back(a_.node_token[u]);
        }
        std::sort(near.begin(), near.end());
        near.erase(std::unique(near.begin(), near.end()), near.end());
        for (std::size_t t : near) {
          if (!single_root_with(t, v)) continue;
          a_.node_token[v] = t;
          changed = true;
          break;
        }
      }
    }
  }

  const AsGraph& g_;
  const std::vector<Token>& tokens_;
  const AlignerWeights& w_;
  const BlobPolicy& policy_;
  Alignment a_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::vector<double>> base_;
};

}  // namespace

Alignment align(const AsGraph& amr, const std::vector<Token>& tokens, const PipelineConfig& config) {
  return Aligner(amr, tokens, config).run();
}

}  // namespace am
