#pragma once

// Count-based stand-in for the neural scorers: smoothed relative
// frequencies from an AM treebank, backed off from word forms to POS tags
// to global counts, turned into a score table in the log domain.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "am/lexicalize.hpp"
#include "am/preprocess.hpp"
#include "am/score_table.hpp"
#include "am/treebank.hpp"

namespace am {

struct ScorerOptions {
  double lambda = 0.1;  // add-lambda smoothing at the coarsest level
  double alpha = 1.0;   // weight of the backed-off estimate
};

/// Signed head-dependent distance, coarsened; 0 for the ROOT edge.
int distance_bucket(std::size_t head, std::size_t dep);

class CountScorer {
 public:
  /// Supertag columns must be delexicalised (LEX) with lexlabels. Comment
  /// lines "::pre NAME <token> <words...>" feed the name gazetteer.
  static CountScorer train(const Treebank& tb, ScorerOptions options = {});

  /// `k` non-bottom candidates per token plus bottom; every label of the
  /// training inventory listed for every pair; label_default is the
  /// smoothing floor.
  ScoreTable score_sentence(const std::vector<Token>& tokens, std::size_t k) const;

  const Lexicon& lexicon() const noexcept { return lexicon_; }
  const NameGazetteer& gazetteer() const noexcept { return gazetteer_; }

  std::string to_json() const;
  static CountScorer from_json(std::string_view text);

 private:
  struct Counts {
    std::map<std::string, double> by;  // outcome -> count
    double total = 0.0;
    void add(const std::string& outcome, double c = 1.0) {
      by[outcome] += c;
      total += c;
    }
    double get(const std::string& outcome) const {
      auto it = by.find(outcome);
      return it == by.end() ? 0.0 : it->second;
    }
  };
  using Table = std::map<std::string, Counts>;

  double supertag_prob(const std::string& form, const std::string& pos, const std::string& tag) const;
  double arc_prob(const Token& h, const Token& d, int bucket) const;
  double label_prob(const Token& h, const Token& d, bool rightward, const std::string& op) const;

  ScorerOptions options_;
  std::map<std::string, AsGraph> graphs_;  // canonical render -> delexicalised supertag
  Counts tag_global_;
  Table tag_pos_, tag_form_;
  Counts arc_global_;
  Table arc_coarse_, arc_pos_, arc_lex_;  // outcome "1"/"0"
  Counts label_global_;
  Table label_dir_, label_pos_, label_lex_;
  Lexicon lexicon_;
  NameGazetteer gazetteer_;
};

}  // namespace am
