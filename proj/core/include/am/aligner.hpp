#pragma once

// Aligner-lite: greedy token-to-node alignment with two kinds of actions.
// Action 1 aligns a token to a node by lexical similarity; action 2 grows an
// existing alignment to an adjacent node. An action is only taken if every
// fragment keeps a single root. Leftover nodes join a neighbouring fragment.

#include <optional>
#include <string>
#include <vector>

#include "am/amdep.hpp"
#include "am/asgraph.hpp"
#include "am/policy.hpp"

namespace am {

struct Alignment {
  std::vector<std::size_t> node_token;                  // per node; 0 = unaligned
  std::vector<std::optional<AsGraph::NodeId>> lexical;  // per token (index i-1)
  std::vector<AsGraph::NodeId> unaligned;

  /// Nodes aligned to 1-based token t.
  std::vector<AsGraph::NodeId> fragment(std::size_t t) const;
};

/// Base score of aligning `form` to a node labelled `label` (0: no match).
double lexical_similarity(const std::string& form, const std::string& label, const AlignerWeights& w);

/// Crude suffix stripping shared by the aligner and the relexicaliser.
std::string stem(const std::string& word);

/// Concept label without its sense suffix ("want-01" -> "want") or quotes.
std::string label_base(const std::string& label);

/// Nodes of token t's fragment that other fragments attach to: the graph
/// root, and endpoints of edges owned (per policy) by a node outside the
/// fragment. If there are none, the fragment's internal tops are returned.
std::vector<AsGraph::NodeId> fragment_root_candidates(const AsGraph& amr,
                                                      const std::vector<std::size_t>& node_token,
                                                      std::size_t t, const BlobPolicy& policy);

Alignment align(const AsGraph& amr, const std::vector<Token>& tokens, const PipelineConfig& config);

}  // namespace am
