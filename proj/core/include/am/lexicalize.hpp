#pragma once

// LEX placeholders: the node label that corresponds to the aligned word is
// factored out of each supertag and restored after decoding.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "am/amdep.hpp"
#include "am/asgraph.hpp"
#include "am/policy.hpp"
#include "am/preprocess.hpp"

namespace am {

inline constexpr const char* kLexLabel = "LEX";

struct Delexicalized {
  AsGraph graph;
  std::string lexlabel;
};

/// Throws GraphError if `lexical` is not a labeled node of g.
Delexicalized delexicalize(const AsGraph& g, AsGraph::NodeId lexical);
/// Picks the labeled node most similar to `form`; throws GraphError if no
/// node resembles it.
Delexicalized delexicalize(const AsGraph& g, const std::string& form,
                           const AlignerWeights& weights = AlignerWeights::defaults());

std::optional<AsGraph::NodeId> lex_node(const AsGraph& g);
/// Replaces the LEX label; graphs without LEX are returned unchanged.
AsGraph relexicalize(const AsGraph& g, const std::string& label);

/// Word -> node label counts from training.
class Lexicon {
 public:
  void add(const std::string& form, const std::string& label, std::size_t count = 1);
  std::optional<std::string> most_frequent(const std::string& form) const;
  std::size_t frequency(const std::string& form) const;
  const std::map<std::string, std::map<std::string, std::size_t>>& counts() const noexcept { return counts_; }

  /// Supplied label, else the most frequent label of the word, else the
  /// lower-cased word itself (with "-01" if the LEX node has outgoing ARG
  /// edges, as for verbs).
  std::string resolve(const std::string& form, const AsGraph& delexicalized,
                      const std::optional<std::string>& supplied) const;

 private:
  std::map<std::string, std::map<std::string, std::size_t>> counts_;
};

std::string lower_form(const std::string& form);

/// Fills every LEX node of the tree. Tokens with a preprocessing record get
/// its marker label so that postprocess() can expand them.
AmDepTree relexicalize_tree(const AmDepTree& tree, const Lexicon* lexicon,
                            const std::vector<PreRecord>* records = nullptr);

}  // namespace am
