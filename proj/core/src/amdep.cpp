#include "am/amdep.hpp"

#include <algorithm>

#include "am/error.hpp"

namespace am {

std::size_t AmDepTree::root() const noexcept {
  for (std::size_t i = 0; i < heads.size(); ++i)
    if (heads[i] == 0) return i + 1;
  return 0;
}

AmType AmDepTree::supertag_type(std::size_t token) const {
  const auto& g = supertags.at(token - 1);
  return g ? type_of(*g) : AmType::bottom();
}

std::vector<std::vector<std::size_t>> AmDepTree::children() const {
  std::vector<std::vector<std::size_t>> ch(size() + 1);
  for (std::size_t i = 0; i < heads.size(); ++i)
    if (heads[i] <= size()) ch[heads[i]].push_back(i + 1);
  return ch;
}

void AmDepTree::resize(std::size_t n) {
  tokens.resize(n);
  supertags.resize(n);
  lexlabels.resize(n);
  heads.resize(n, 0);
  labels.resize(n);
}

void validate_structure(const AmDepTree& tree) {
  const std::size_t n = tree.size();
  if (tree.supertags.size() != n || tree.heads.size() != n || tree.labels.size() != n ||
      tree.lexlabels.size() != n)
    throw StructureError("column lengths differ");
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t h = tree.heads[i];
    if (h > n) throw StructureError("token " + std::to_string(i + 1) + " has head out of range");
    if (h == i + 1) throw StructureError("token " + std::to_string(i + 1) + " heads itself");
    if (h == 0) {
      ++roots;
      continue;
    }
    if (!tree.labels[i]) throw StructureError("token " + std::to_string(i + 1) + " has no edge label");
    bool bottom = !tree.supertags[i].has_value();
    if (tree.labels[i]->is_ignore() && !bottom)
      throw StructureError("IGNORE edge into non-bottom token " + std::to_string(i + 1));
    if (!tree.labels[i]->is_ignore() && bottom)
      throw StructureError(tree.labels[i]->str() + " edge into bottom token " + std::to_string(i + 1));
  }
  if (n > 0 && roots != 1) throw StructureError("tree must have exactly one ROOT edge");
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t steps = 0;
    for (std::size_t h = i + 1; h != 0; h = tree.heads[h - 1])
      if (++steps > n) throw StructureError("cycle through token " + std::to_string(i + 1));
  }
}

HeadState initial_state(const AmType& supertag_type) {
  return HeadState{supertag_type, supertag_type, {}};
}

namespace {

// Applies queued arguments while possible. Returns false once the state
// cannot complete any more.
bool flush(HeadState& st) {
  for (bool progress = true; progress && !st.pending.empty();) {
    progress = false;
    for (std::size_t i = 0; i < st.pending.size(); ++i) {
      auto r = apply_type(st.current, st.pending[i].first, st.pending[i].second);
      if (!r) continue;
      st.current = *r;
      st.pending.erase(st.pending.begin() + static_cast<std::ptrdiff_t>(i));
      progress = true;
      break;
    }
  }
  // Names only ever leave the current type, so a queued name that is no
  // longer mentioned can never be applied.
  for (const auto& [name, type] : st.pending) {
    if (!st.current.mentions(name)) return false;
    auto ann = st.current.annotation(name);
    if (ann && *ann != type) return false;
  }
  return true;
}

}  // namespace

std::optional<HeadState> attach(const HeadState& state, const EdgeOp& op, const AmType& child) {
  if (op.is_ignore()) {
    if (!child.is_bottom()) return std::nullopt;
    return state;
  }
  if (state.initial.is_bottom() || child.is_bottom()) return std::nullopt;
  if (op.is_modify()) {
    if (!modify_type(state.initial, op.source, child)) return std::nullopt;
    return state;
  }
  HeadState next = state;
  auto pos = std::lower_bound(next.pending.begin(), next.pending.end(), op.source,
                              [](const auto& e, const std::string& s) { return e.first < s; });
  if (pos != next.pending.end() && pos->first == op.source) return std::nullopt;
  next.pending.insert(pos, {op.source, child});
  if (!flush(next)) return std::nullopt;
  return next;
}

std::vector<EdgeOp> candidate_ops(const HeadState& state, const AmType& child) {
  std::vector<EdgeOp> ops;
  if (child.is_bottom()) {
    ops.push_back(EdgeOp::ignore());
    return ops;
  }
  if (state.initial.is_bottom()) return ops;
  for (const auto& name : state.current.all_names()) ops.push_back(EdgeOp::apply(name));
  for (const auto& [name, ann] : child.entries())
    if (ann.is_empty()) ops.push_back(EdgeOp::modify(name));
  return ops;
}

std::optional<std::vector<AmType>> check_well_typed(const AmDepTree& tree) {
  validate_structure(tree);
  const std::size_t n = tree.size();
  std::vector<AmType> types(n);
  if (n == 0) return types;
  auto ch = tree.children();
  // Post-order without recursion: push in preorder, consume reversed.
  std::vector<std::size_t> order, stack{tree.root()};
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (std::size_t c : ch[u]) stack.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::size_t u = *it;
    std::optional<HeadState> st = initial_state(tree.supertag_type(u));
    for (std::size_t c : ch[u]) {
      st = attach(*st, *tree.labels[c - 1], types[c - 1]);
      if (!st) return std::nullopt;
    }
    if (!st->complete()) return std::nullopt;
    types[u - 1] = st->current;
  }
  return types;
}

std::string AmTerm::str() const {
  if (is_constant()) return "c" + std::to_string(index);
  return op->str() + "[" + std::to_string(index) + "," + std::to_string(right->index) + "](" +
         left->str() + ", " + right->str() + ")";
}

namespace {

std::shared_ptr<const AmTerm> build_term(const AmDepTree& tree,
                                         const std::vector<std::vector<std::size_t>>& ch,
                                         const std::vector<AmType>& types, std::size_t h,
                                         const OrderChooser& choose) {
  auto leaf = std::make_shared<AmTerm>();
  leaf->index = h;
  leaf->graph = std::make_shared<const AsGraph>(*tree.supertags[h - 1]);
  std::shared_ptr<const AmTerm> term = leaf;
  std::vector<std::size_t> rest;
  for (std::size_t c : ch[h])
    if (!tree.labels[c - 1]->is_ignore()) rest.push_back(c);
  AmType current = tree.supertag_type(h);
  while (!rest.empty()) {
    std::vector<std::size_t> ok;
    for (std::size_t c : rest)
      if (op_result(*tree.labels[c - 1], current, types[c - 1])) ok.push_back(c);
    if (ok.empty()) throw TypeError("no admissible operation at token " + std::to_string(h));
    std::size_t c = choose(h, ok);
    if (std::find(ok.begin(), ok.end(), c) == ok.end())
      throw TypeError("order chooser returned an inadmissible dependent");
    auto node = std::make_shared<AmTerm>();
    node->index = h;
    node->op = *tree.labels[c - 1];
    node->left = term;
    node->right = build_term(tree, ch, types, c, choose);
    term = node;
    current = *op_result(*tree.labels[c - 1], current, types[c - 1]);
    rest.erase(std::find(rest.begin(), rest.end(), c));
  }
  return term;
}

}  // namespace

AmTerm term_from_deptree(const AmDepTree& tree, const OrderChooser& choose) {
  auto types = check_well_typed(tree);
  if (!types) throw TypeError("dependency tree is not well-typed");
  if (tree.size() == 0) throw TypeError("empty dependency tree");
  std::size_t r = tree.root();
  if (!tree.supertags[r - 1]) throw TypeError("root token is bottom");
  return *build_term(tree, tree.children(), *types, r, choose);
}

AmTerm term_from_deptree(const AmDepTree& tree) {
  return term_from_deptree(tree, [&tree](std::size_t, const std::vector<std::size_t>& ok) {
    for (std::size_t c : ok)
      if (tree.labels[c - 1]->is_modify()) return c;
    return ok.front();
  });
}

AsGraph eval(const AmTerm& term) {
  if (term.is_constant()) return *term.graph;
  AsGraph head = eval(*term.left);
  AsGraph dep = eval(*term.right);
  if (term.op->is_apply()) return apply(head, term.op->source, dep);
  if (term.op->is_modify()) return modify(head, term.op->source, dep);
  throw TypeError("IGNORE inside a term");
}

std::vector<std::size_t> contentful_tokens(const AmDepTree& tree) {
  std::vector<std::size_t> out;
  if (tree.size() == 0) return out;
  auto ch = tree.children();
  std::vector<std::size_t> stack{tree.root()};
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (std::size_t c : ch[u])
      if (!tree.labels[c - 1] || !tree.labels[c - 1]->is_ignore()) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_projective(const AmDepTree& tree) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (std::size_t i = 0; i < tree.heads.size(); ++i) {
    std::size_t a = std::min(tree.heads[i], i + 1), b = std::max(tree.heads[i], i + 1);
    spans.emplace_back(a, b);
  }
  for (const auto& [a, b] : spans)
    for (const auto& [c, d] : spans)
      if (a < c && c < b && b < d) return false;
  return true;
}

}  // namespace am
