#pragma once

// Splitting an aligned AMR into elementary as-graphs and an AM dependency
// tree that evaluates back to it.

#include <optional>
#include <string>
#include <vector>

#include "am/aligner.hpp"
#include "am/amdep.hpp"
#include "am/asgraph.hpp"
#include "am/policy.hpp"

namespace am {

struct Decomposition {
  bool ok = false;
  /// Rejection reason: unaligned-node, multi-root-fragment, multi-parent,
  /// unnamable-edge, annotation-conflict, eval-mismatch.
  std::string reason;
  std::string detail;
  AmDepTree tree;  // lexicalised supertags, no lexlabels
  /// Per token, the lexical node inside its supertag.
  std::vector<std::optional<AsGraph::NodeId>> lexical;
  /// The AMR the tree evaluates to: the input minus removed reentrant edges.
  AsGraph amr;
  std::size_t reentrancies_removed = 0;
};

/// Never throws on bad input; failures come back with ok == false.
Decomposition decompose(const AsGraph& amr, const Alignment& alignment,
                        const std::vector<Token>& tokens, const BlobPolicy& policy,
                        std::size_t max_removals = 3);

}  // namespace am
