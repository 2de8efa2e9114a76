// PENMAN reader and canonical writer, with the `<root>` / `<name(TYPE)>`
// decorations used for as-graphs.

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "am/asgraph.hpp"
#include "am/error.hpp"

namespace am {

bool is_constant_label(const std::string& label) {
  if (label.empty()) return false;
  if (label.front() == '"') return true;
  if (label == "-" || label == "+") return true;
  std::size_t i = (label[0] == '-' || label[0] == '+') ? 1 : 0;
  if (i >= label.size()) return false;
  bool digit = false, dot = false;
  for (; i < label.size(); ++i) {
    char c = label[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      return false;
    }
  }
  return digit;
}

namespace {

// Bare symbols AMR uses as attribute values (`:mode imperative`).
bool is_symbolic_constant(std::string_view atom) {
  return atom == "imperative" || atom == "expressive" || atom == "interrogative";
}

// Roles whose "-of" is part of the name rather than an inversion marker.
bool is_real_of_role(std::string_view role) {
  return role == "consist-of" || role == "prep-out-of" || role == "prep-on-behalf-of";
}

class PenmanReader {
 public:
  PenmanReader(std::string_view text, bool decorations)
      : text_(text), decorations_(decorations) {}

  AsGraph read() {
    skip_ws();
    if (peek() != '(') throw ParseError("expected '('", pos_);
    AsGraph::NodeId top = read_node();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("trailing characters after graph", pos_);

    for (const auto& pend : pending_) {
      auto it = vars_.find(pend.atom);
      AsGraph::NodeId target;
      if (it != vars_.end()) {
        target = it->second;
      } else if (is_constant_label(pend.atom) || is_symbolic_constant(pend.atom)) {
        target = g_.add_node(pend.atom);
      } else {
        throw ParseError("unbound variable '" + pend.atom + "'", pend.offset);
      }
      add_edge(pend.owner, target, pend.role, pend.offset);
    }
    if (!root_) {
      if (decorations_) throw ParseError("no node is marked <root>", 0);
      root_ = top;
    }
    g_.set_root(*root_);
    for (const auto& [name, src] : sources_) {
      if (src.first == *root_) throw ParseError("root node cannot be source '" + name + "'", 0);
      g_.set_source(name, src.first, src.second);
    }
    try {
      g_.validate();
    } catch (const GraphError& e) {
      throw ParseError(e.what(), 0);
    }
    return std::move(g_);
  }

 private:
  struct Pending {
    AsGraph::NodeId owner;
    std::string role;
    std::string atom;
    std::size_t offset;
  };

  AsGraph::NodeId read_node() {
    expect('(');
    skip_ws();
    std::size_t var_at = pos_;
    std::string var = read_token("<)(/: \t\r\n");
    if (var.empty()) throw ParseError("expected variable", pos_);
    if (vars_.count(var)) throw ParseError("duplicate variable '" + var + "'", var_at);
    AsGraph::NodeId id = g_.add_node();
    vars_[var] = id;
    skip_ws();
    if (peek() == '<') {
      if (!decorations_) throw ParseError("decorations not allowed here", pos_);
      read_decoration(id);
      skip_ws();
    }
    if (peek() == '/') {
      ++pos_;
      skip_ws();
      std::size_t at = pos_;
      std::string label = peek() == '"' ? read_quoted() : read_token(")(: \t\r\n");
      if (label.empty()) throw ParseError("expected concept label", at);
      g_.set_label(id, label);
      skip_ws();
    }
    while (peek() == ':') {
      ++pos_;
      std::size_t role_at = pos_;
      std::string role = read_token(")( \t\r\n\"");
      if (role.empty()) throw ParseError("expected role", role_at);
      skip_ws();
      if (peek() == '(') {
        AsGraph::NodeId child = read_node();
        add_edge(id, child, role, role_at);
      } else if (peek() == '"') {
        std::string lit = read_quoted();
        add_edge(id, g_.add_node(lit), role, role_at);
      } else {
        std::size_t at = pos_;
        std::string atom = read_token(")( \t\r\n:");
        if (atom.empty()) throw ParseError("expected role target", at);
        pending_.push_back(Pending{id, role, atom, role_at});
      }
      skip_ws();
    }
    expect(')');
    return id;
  }

  void add_edge(AsGraph::NodeId owner, AsGraph::NodeId target, const std::string& role,
                std::size_t at) {
    bool inverse = role.size() > 3 && role.compare(role.size() - 3, 3, "-of") == 0 &&
                   !is_real_of_role(role);
    try {
      if (inverse) {
        g_.add_edge(target, owner, role.substr(0, role.size() - 3));
      } else {
        g_.add_edge(owner, target, role);
      }
    } catch (const GraphError& e) {
      throw ParseError(e.what(), at);
    }
  }

  void read_decoration(AsGraph::NodeId id) {
    std::size_t start = pos_;
    expect('<');
    int depth = 0;
    std::size_t item_start = pos_;
    std::vector<std::pair<std::string, std::size_t>> items;
    for (;; ++pos_) {
      if (pos_ >= text_.size()) throw ParseError("unterminated decoration", start);
      char c = text_[pos_];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (depth == 0 && (c == ',' || c == '>')) {
        items.emplace_back(std::string(text_.substr(item_start, pos_ - item_start)), item_start);
        item_start = pos_ + 1;
        if (c == '>') break;
      }
    }
    ++pos_;
    for (auto& [raw, at] : items) {
      std::string item = trim(raw);
      if (item == "root") {
        if (root_) throw ParseError("multiple roots", at);
        root_ = id;
        continue;
      }
      std::size_t paren = item.find('(');
      std::string name = trim(item.substr(0, paren));
      if (!is_valid_source_name(name)) throw ParseError("bad source name '" + name + "'", at);
      AmType ann;
      if (paren != std::string::npos) {
        try {
          ann = parse_type(item.substr(paren));
        } catch (const ParseError& e) {
          throw ParseError(std::string("bad annotation: ") + e.what(), at);
        }
        if (ann.is_bottom()) throw ParseError("bottom annotation", at);
      }
      if (sources_.count(name)) throw ParseError("duplicate source name '" + name + "'", at);
      for (const auto& [other, src] : sources_)
        if (src.first == id) throw ParseError("node carries two sources", at);
      sources_.emplace(name, std::make_pair(id, ann));
    }
  }

  static std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  std::string read_quoted() {
    std::size_t start = pos_;
    expect('"');
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      ++pos_;
    }
    if (pos_ >= text_.size()) throw ParseError("unterminated string", start);
    ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string read_token(std::string_view stops) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && stops.find(text_[pos_]) == std::string_view::npos) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  bool decorations_;
  std::size_t pos_ = 0;
  AsGraph g_;
  std::unordered_map<std::string, AsGraph::NodeId> vars_;
  std::vector<Pending> pending_;
  std::optional<AsGraph::NodeId> root_;
  std::map<std::string, std::pair<AsGraph::NodeId, AmType>> sources_;
};

class PenmanWriter {
 public:
  PenmanWriter(const AsGraph& g, bool decorations)
      : g_(g), decorations_(decorations), colors_(node_colors(g)) {
    std::vector<int> in(g.node_count(), 0), out(g.node_count(), 0);
    for (const auto& e : g.edges()) {
      ++out[e.from];
      ++in[e.to];
    }
    constant_.assign(g.node_count(), 0);
    for (AsGraph::NodeId u = 0; u < g.node_count(); ++u) {
      constant_[u] = u != g.root() && in[u] == 1 && out[u] == 0 && !g.source_at(u) &&
                     g.label(u) && is_constant_label(*g.label(u));
    }
    incident_.resize(g.node_count());
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      incident_[g.edges()[i].from].push_back(i);
      incident_[g.edges()[i].to].push_back(i);
    }
    printed_.assign(g.edges().size(), 0);
    visited_.assign(g.node_count(), 0);
    assign_variables();
  }

  std::string write() {
    std::string out;
    write_node(g_.root(), out);
    return out;
  }

 private:
  void assign_variables() {
    // Variables follow first-visit order of the same traversal as write().
    std::vector<char> seen(g_.node_count(), 0);
    std::vector<char> edge_done(g_.edges().size(), 0);
    std::map<char, int> counters;
    var_.assign(g_.node_count(), "");
    std::function<void(AsGraph::NodeId)> visit = [&](AsGraph::NodeId u) {
      seen[u] = 1;
      char letter = 's';
      if (const auto& l = g_.label(u)) {
        letter = 'x';
        for (char c : *l)
          if (std::isalpha(static_cast<unsigned char>(c))) {
            letter = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            break;
          }
      }
      var_[u] = letter + std::to_string(++counters[letter]);
      for (const auto& [role, v, idx] : children(u, edge_done)) {
        (void)role;
        if (edge_done[idx]) continue;  // printed deeper down already
        edge_done[idx] = 1;
        if (!seen[v] && !constant_[v]) visit(v);
      }
    };
    visit(g_.root());
  }

  // Unprinted incident edges of u as (printed role, other end, edge index).
  std::vector<std::tuple<std::string, AsGraph::NodeId, std::size_t>> children(
      AsGraph::NodeId u, const std::vector<char>& done) const {
    std::vector<std::tuple<std::string, AsGraph::NodeId, std::size_t>> out;
    for (std::size_t idx : incident_[u]) {
      if (done[idx]) continue;
      const auto& e = g_.edges()[idx];
      if (e.from == u) {
        out.emplace_back(e.label, e.to, idx);
      } else {
        out.emplace_back(e.label + "-of", e.from, idx);
      }
    }
    // Self-loops appear twice in incident_.
    // Outgoing edges before inverted ones, then by role and neighbour colour.
    auto inverted = [&](const auto& x) { return g_.edges()[std::get<2>(x)].from != u; };
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
      if (inverted(a) != inverted(b)) return inverted(b);
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
      auto ca = colors_[std::get<1>(a)], cb = colors_[std::get<1>(b)];
      if (ca != cb) return ca < cb;
      return std::get<2>(a) < std::get<2>(b);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const auto& a, const auto& b) { return std::get<2>(a) == std::get<2>(b); }),
              out.end());
    return out;
  }

  void write_node(AsGraph::NodeId u, std::string& out) {
    visited_[u] = 1;
    out += "(" + var_[u];
    if (decorations_) {
      std::string deco;
      if (u == g_.root() && g_.has_root()) deco = "root";
      if (auto name = g_.source_at(u)) {
        if (!deco.empty()) deco += ", ";
        deco += *name;
        const AmType& ann = g_.sources().at(*name).annotation;
        if (!ann.is_empty()) deco += ann.str();
      }
      if (!deco.empty()) out += "<" + deco + ">";
    }
    if (g_.label(u)) out += " / " + *g_.label(u);
    for (const auto& [role, v, idx] : children(u, printed_)) {
      if (printed_[idx]) continue;
      printed_[idx] = 1;
      out += " :" + role + " ";
      if (constant_[v]) {
        visited_[v] = 1;
        out += *g_.label(v);
      } else if (visited_[v]) {
        out += var_[v];
      } else {
        write_node(v, out);
      }
    }
    out += ")";
  }

  const AsGraph& g_;
  bool decorations_;
  std::vector<std::uint64_t> colors_;
  std::vector<char> constant_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<char> printed_;
  std::vector<char> visited_;
  std::vector<std::string> var_;
};

}  // namespace

AsGraph parse_asgraph(std::string_view text) { return PenmanReader(text, true).read(); }

std::string render_asgraph(const AsGraph& g) {
  g.validate();
  return PenmanWriter(g, true).write();
}

AsGraph parse_amr(std::string_view text) { return PenmanReader(text, false).read(); }

std::string render_amr(const AsGraph& g) {
  g.validate();
  return PenmanWriter(g, false).write();
}

}  // namespace am
