#pragma once

// Factored scores for one sentence: supertag candidates per token, unlabeled
// edge scores E(i,k) with virtual root 0, and sparse label scores L(op|i,k).
// A score of -infinity marks a forbidden choice.

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "am/amdep.hpp"
#include "am/state_space.hpp"

namespace am {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct SupertagCandidate {
  std::optional<AsGraph> graph;  // nullopt is bottom
  double score = 0.0;
  std::optional<std::string> lexlabel;
  AmType type = AmType::bottom();

  static SupertagCandidate bottom(double score);
  static SupertagCandidate of(AsGraph graph, double score,
                              std::optional<std::string> lexlabel = std::nullopt);
};

class ScoreTable {
 public:
  ScoreTable() = default;
  explicit ScoreTable(std::vector<Token> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<Token>& tokens() const noexcept { return tokens_; }

  /// Candidates of 1-based token i.
  const std::vector<SupertagCandidate>& candidates(std::size_t i) const { return supertags_.at(i - 1); }
  void add_candidate(std::size_t i, SupertagCandidate c);

  double edge(std::size_t i, std::size_t k) const;
  void set_edge(std::size_t i, std::size_t k, double score);

  double label(std::size_t i, std::size_t k, OpId op) const;
  double label(std::size_t i, std::size_t k, const EdgeOp& op) const { return label(i, k, op_id(op)); }
  void set_label(std::size_t i, std::size_t k, const EdgeOp& op, double score);
  /// Labels explicitly listed for (i,k).
  const std::vector<std::pair<OpId, double>>& listed_labels(std::size_t i, std::size_t k) const;

  double label_default = 0.0;
  double edge_default = 0.0;

  /// Indices of the k best finite non-bottom candidates of token i (ties by
  /// position) followed by every finite bottom candidate.
  std::vector<std::size_t> kbest(std::size_t i, std::size_t k) const;

 private:
  std::size_t at(std::size_t i, std::size_t k) const;

  std::vector<Token> tokens_;
  std::vector<std::vector<SupertagCandidate>> supertags_;
  std::vector<double> edges_;
  std::vector<char> edge_set_;
  std::vector<std::vector<std::pair<OpId, double>>> labels_;
};

/// JSON: {tokens:[{form,pos}], supertags:[[{graph,score,lexlabel?}]],
/// edges:[[i,k,score]], labels:[[i,k,op,score]], label_default, edge_default?}.
/// Scores may be the string "-inf". Throws ParseError.
ScoreTable read_score_table(std::string_view json_text);
std::string write_score_table(const ScoreTable& table);
/// Several tables: a JSON array, or objects one after another.
std::vector<ScoreTable> read_score_tables(std::string_view text);

/// Tree score: chosen supertag scores plus E + L over every non-root edge.
double score_tree(const ScoreTable& table, const AmDepTree& tree,
                  const std::vector<std::size_t>& choices);

/// Tree over the table's tokens with the given candidates, heads and labels.
AmDepTree make_tree(const ScoreTable& table, const std::vector<std::size_t>& choices,
                    const std::vector<std::size_t>& heads,
                    const std::vector<std::optional<EdgeOp>>& labels);

}  // namespace am
