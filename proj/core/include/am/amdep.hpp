#pragma once

// AM dependency trees, the per-head typing state shared by the checker and
// the decoders, indexed AM terms and their evaluation.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "am/amtypes.hpp"
#include "am/asgraph.hpp"

namespace am {

struct Token {
  std::string form;
  std::string pos;
  friend bool operator==(const Token&, const Token&) = default;
};

/// Tokens are 1-based in `heads` (0 denotes ROOT); vectors are indexed from
/// zero, so token i lives at position i-1.
struct AmDepTree {
  std::vector<Token> tokens;
  std::vector<std::optional<AsGraph>> supertags;  // nullopt is bottom
  std::vector<std::optional<std::string>> lexlabels;
  std::vector<std::size_t> heads;
  std::vector<std::optional<EdgeOp>> labels;  // nullopt on the ROOT edge

  std::size_t size() const noexcept { return tokens.size(); }
  /// 1-based index of the token attached to ROOT, 0 if there is none.
  std::size_t root() const noexcept;
  AmType supertag_type(std::size_t token) const;
  /// children()[h] lists dependents of 1-based token h in ascending order;
  /// children()[0] holds the root.
  std::vector<std::vector<std::size_t>> children() const;
  void resize(std::size_t n);
};

/// Throws StructureError unless the tree is a single tree rooted at ROOT,
/// IGNORE edges point into bottom tokens and APP/MOD edges do not.
void validate_structure(const AmDepTree& tree);

/// Typing state of a head while its dependents are attached.
///
/// MOD dependents are checked against the initial type. APP dependents are
/// queued and applied as soon as the type arithmetic allows it, because a
/// source may only be filled after every source whose annotation requests it.
struct HeadState {
  AmType initial;
  AmType current;
  std::vector<std::pair<std::string, AmType>> pending;  // sorted by name

  bool complete() const noexcept { return pending.empty(); }
  friend bool operator==(const HeadState&, const HeadState&) = default;
};

HeadState initial_state(const AmType& supertag_type);

/// Attaches a dependent of type `child` with edge `op`; nullopt if the state
/// can no longer lead to a well-typed head.
std::optional<HeadState> attach(const HeadState& state, const EdgeOp& op, const AmType& child);

/// Every edge label worth trying for this head and dependent type.
std::vector<EdgeOp> candidate_ops(const HeadState& state, const AmType& child);

/// Subtree types per token (index 0 = token 1), or nullopt if some
/// operation is undefined. Throws StructureError on structural problems.
std::optional<std::vector<AmType>> check_well_typed(const AmDepTree& tree);

/// Indexed AM term: either a constant anchored at a token or an operation
/// whose head index is that of its left child.
struct AmTerm {
  std::size_t index = 0;
  std::shared_ptr<const AsGraph> graph;  // constants only
  std::optional<EdgeOp> op;              // operations only
  std::shared_ptr<const AmTerm> left, right;

  bool is_constant() const noexcept { return !op.has_value(); }
  std::string str() const;
};

/// Picks which of the currently admissible dependents of a head is combined
/// next. Receives (head token, admissible dependent tokens) and returns one
/// of them.
using OrderChooser =
    std::function<std::size_t(std::size_t, const std::vector<std::size_t>&)>;

/// Canonical term: MOD dependents first by token index, then APP dependents,
/// each time the lowest-index one whose application is defined. IGNORE
/// dependents are left out. Throws TypeError if the tree is not well-typed.
AmTerm term_from_deptree(const AmDepTree& tree);

/// Same, with a caller-chosen order among admissible operations; MOD and APP
/// steps may interleave.
AmTerm term_from_deptree(const AmDepTree& tree, const OrderChooser& choose);

AsGraph eval(const AmTerm& term);

/// Tokens reachable from the root without crossing an IGNORE edge.
std::vector<std::size_t> contentful_tokens(const AmDepTree& tree);

/// Whether no two edges cross (ROOT edge included).
bool is_projective(const AmDepTree& tree);

}  // namespace am
