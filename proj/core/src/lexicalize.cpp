#include "am/lexicalize.hpp"

#include <cctype>

#include "am/aligner.hpp"
#include "am/error.hpp"

namespace am {

std::string lower_form(const std::string& form) {
  std::string s = form;
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Delexicalized delexicalize(const AsGraph& g, AsGraph::NodeId lexical) {
  if (lexical >= g.node_count() || !g.label(lexical)) throw GraphError("missing lexical node");
  Delexicalized d{g, *g.label(lexical)};
  d.graph.set_label(lexical, std::string(kLexLabel));
  return d;
}

Delexicalized delexicalize(const AsGraph& g, const std::string& form, const AlignerWeights& weights) {
  std::optional<AsGraph::NodeId> best;
  double best_score = 0.0;
  for (AsGraph::NodeId u = 0; u < g.node_count(); ++u) {
    if (!g.label(u)) continue;
    double s = lexical_similarity(form, *g.label(u), weights);
    if (s > best_score) {
      best = u;
      best_score = s;
    }
  }
  if (!best) throw GraphError("missing lexical node for \"" + form + "\"");
  return delexicalize(g, *best);
}

std::optional<AsGraph::NodeId> lex_node(const AsGraph& g) {
  for (AsGraph::NodeId u = 0; u < g.node_count(); ++u)
    if (g.label(u) == std::optional<std::string>(kLexLabel)) return u;
  return std::nullopt;
}

AsGraph relexicalize(const AsGraph& g, const std::string& label) {
  AsGraph out = g;
  if (auto u = lex_node(g)) out.set_label(*u, label);
  return out;
}

void Lexicon::add(const std::string& form, const std::string& label, std::size_t count) {
  counts_[lower_form(form)][label] += count;
}

std::optional<std::string> Lexicon::most_frequent(const std::string& form) const {
  auto it = counts_.find(lower_form(form));
  if (it == counts_.end()) return std::nullopt;
  const std::string* best = nullptr;
  std::size_t c = 0;
  for (const auto& [label, n] : it->second)
    if (n > c) {
      best = &label;
      c = n;
    }
  return best ? std::optional<std::string>(*best) : std::nullopt;
}

std::size_t Lexicon::frequency(const std::string& form) const {
  auto it = counts_.find(lower_form(form));
  if (it == counts_.end()) return 0;
  std::size_t n = 0;
  for (const auto& [label, c] : it->second) n += c;
  return n;
}

std::string Lexicon::resolve(const std::string& form, const AsGraph& delexicalized,
                             const std::optional<std::string>& supplied) const {
  if (supplied) return *supplied;
  if (auto m = most_frequent(form)) return *m;
  std::string literal = lower_form(form);
  if (auto u = lex_node(delexicalized)) {
    for (const auto& e : delexicalized.edges())
      if (e.from == *u && arg_index(e.label)) return literal + "-01";
  }
  return literal;
}

AmDepTree relexicalize_tree(const AmDepTree& tree, const Lexicon* lexicon, const std::vector<PreRecord>* records) {
  static const Lexicon empty;
  const Lexicon& lex = lexicon ? *lexicon : empty;
  AmDepTree out = tree;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (!tree.supertags[i] || !lex_node(*tree.supertags[i])) continue;
    std::optional<std::string> label;
    if (records)
      for (const auto& r : *records)
        if (r.token == i + 1) label = marker_label(r);
    if (!label) {
      const std::string& form = tree.tokens[i].form;
      label = lex.resolve(form, *tree.supertags[i], tree.lexlabels[i]);
    }
    out.supertags[i] = relexicalize(*tree.supertags[i], *label);
    out.lexlabels[i] = label;
  }
  return out;
}

}  // namespace am
