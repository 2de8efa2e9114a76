#pragma once

// Annotated s-graphs: rooted, labeled graphs whose source nodes mark open
// argument slots, plus the graph-level apply and modify operations.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "am/amtypes.hpp"

namespace am {

class AsGraph {
 public:
  using NodeId = std::uint32_t;

  struct Edge {
    NodeId from;
    NodeId to;
    std::string label;
    friend auto operator<=>(const Edge&, const Edge&) = default;
  };

  struct Source {
    NodeId node;
    AmType annotation;
  };

  NodeId add_node(std::optional<std::string> label = std::nullopt);
  void add_edge(NodeId from, NodeId to, std::string label);
  void set_root(NodeId node);
  void set_label(NodeId node, std::optional<std::string> label);
  /// Marks `node` as source `name`. The annotation must not be bottom.
  void set_source(const std::string& name, NodeId node, AmType annotation = AmType());
  void remove_source(const std::string& name);
  /// Removes one edge; returns whether it existed.
  bool remove_edge(const Edge& edge);
  /// Drops nodes unreachable (ignoring direction) from the root and renumbers.
  void prune_disconnected();

  /// Throws GraphError if an invariant is violated.
  void validate() const;

  std::size_t node_count() const noexcept { return labels_.size(); }
  const std::optional<std::string>& label(NodeId node) const { return labels_.at(node); }
  const std::vector<std::optional<std::string>>& labels() const noexcept { return labels_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  NodeId root() const noexcept { return root_; }
  bool has_root() const noexcept { return has_root_; }
  const std::map<std::string, Source>& sources() const noexcept { return sources_; }
  std::optional<NodeId> source_node(std::string_view name) const;
  /// Source name carried by `node`, if any.
  std::optional<std::string> source_at(NodeId node) const;

 private:
  std::vector<std::optional<std::string>> labels_;
  std::vector<Edge> edges_;
  NodeId root_ = 0;
  bool has_root_ = false;
  std::map<std::string, Source> sources_;
};

/// Sources with their annotations; never bottom.
AmType type_of(const AsGraph& g);

/// APP_a: fuses the root of `ga` into the a-source of `gp` and unifies the
/// remaining same-named sources. Throws OperationError.
AsGraph apply(const AsGraph& gp, std::string_view a, const AsGraph& ga);

/// MOD_a: fuses the root of `gh` into the a-source of `gm`; other sources of
/// `gm` unify with those of `gh`. Throws OperationError.
AsGraph modify(const AsGraph& gh, std::string_view a, const AsGraph& gm);

bool is_isomorphic(const AsGraph& g1, const AsGraph& g2);

/// Colour-refinement fingerprint per node. Isomorphic graphs receive equal
/// colour multisets; used for canonical ordering and to prune matching.
std::vector<std::uint64_t> node_colors(const AsGraph& g);

/// Extended PENMAN with `<root>` and `<name(TYPE)>` node decorations.
AsGraph parse_asgraph(std::string_view text);
std::string render_asgraph(const AsGraph& g);

/// Quoted strings, numbers, "-" and "+": leaves that PENMAN writes inline.
bool is_constant_label(const std::string& label);

/// Plain PENMAN; the top node is the root and no sources are allowed.
AsGraph parse_amr(std::string_view text);
std::string render_amr(const AsGraph& g);

}  // namespace am
