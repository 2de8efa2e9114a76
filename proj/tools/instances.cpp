#include "instances.hpp"

#include <string>
#include <vector>

namespace amparse {

namespace {

const std::vector<am::AsGraph>& inventory() {
  static const std::vector<am::AsGraph> graphs = [] {
    std::vector<am::AsGraph> g;
    for (const char* s : {
             "(r<root> / a)",
             "(r<root> / b :ARG0 (x<s>))",
             "(r<root> / c :ARG0 (x<s>) :ARG1 (y<o>))",
             "(r<root> / d :ARG0 (x<s>) :ARG1 (y<o(s)>))",
             "(r<root> / e :mod-of (x<m>))",
             "(r<root> / f :ARG0-of (x<s>))",
             "(r<root> / g :op1 (x<op1>) :op2 (y<op2>))",
         })
      g.push_back(am::parse_asgraph(s));
    return g;
  }();
  return graphs;
}

const std::vector<am::EdgeOp>& ops() {
  static const std::vector<am::EdgeOp> v = {
      am::EdgeOp::apply("s"),   am::EdgeOp::apply("o"),   am::EdgeOp::modify("m"), am::EdgeOp::modify("s"),
      am::EdgeOp::apply("op1"), am::EdgeOp::apply("op2"),
  };
  return v;
}

}  // namespace

am::ScoreTable random_instance(std::mt19937_64& rng, const InstanceShape& shape) {
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, inventory().size() - 1);
  std::vector<am::Token> tokens;
  for (std::size_t i = 1; i <= shape.n; ++i) tokens.push_back({"w" + std::to_string(i), "X"});
  am::ScoreTable t(tokens);
  for (std::size_t i = 1; i <= shape.n; ++i) {
    for (std::size_t c = 0; c < shape.candidates; ++c) {
      am::AsGraph g = inventory()[pick(rng)];
      g.set_label(g.root(), *g.label(g.root()) + std::to_string(i));
      t.add_candidate(i, am::SupertagCandidate::of(std::move(g), unit(rng)));
    }
    if (coin(rng) < shape.bottom_rate) t.add_candidate(i, am::SupertagCandidate::bottom(unit(rng)));
  }
  for (std::size_t h = 0; h <= shape.n; ++h)
    for (std::size_t d = 1; d <= shape.n; ++d) {
      if (h == d) continue;
      t.set_edge(h, d, unit(rng));
      if (h == 0) continue;
      for (const auto& op : ops()) t.set_label(h, d, op, unit(rng));
      t.set_label(h, d, am::EdgeOp::ignore(), unit(rng));
    }
  t.label_default = -3.0;
  return t;
}

}  // namespace amparse
