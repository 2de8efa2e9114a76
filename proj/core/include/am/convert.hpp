#pragma once

// Corpus-level pipeline: AMR corpus -> AM treebank (preprocess, align,
// decompose, delexicalise) and sentence -> AMR (score, decode,
// relexicalise, evaluate, postprocess).

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "am/amr_corpus.hpp"
#include "am/count_scorer.hpp"
#include "am/decode.hpp"
#include "am/policy.hpp"
#include "am/treebank.hpp"

namespace am {

struct ConvertStats {
  std::size_t sentences = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t nonprojective = 0;  // among accepted
  std::size_t reentrancies_removed = 0;
  std::size_t unaligned_nodes = 0;
  std::size_t wiki_edges_removed = 0;
  std::size_t supertags_lexicalized = 0;    // distinct elementary graphs
  std::size_t supertags_delexicalized = 0;  // distinct after LEX replacement
  std::map<std::string, std::size_t> reasons;

  double rejection_pct() const;
  double nonprojective_pct() const;
  /// key=value lines.
  std::string to_text() const;
};

struct ConvertedSentence {
  std::string id;
  bool ok = false;
  std::string reason;
  std::string detail;
  /// Preprocessed gold AMR minus removed reentrancies, what the tree
  /// evaluates to. Empty graph for rejected sentences.
  AsGraph gold;
};

struct ConvertResult {
  Treebank treebank;  // accepted sentences only, in input order
  std::vector<ConvertedSentence> sentences;
  ConvertStats stats;
};

/// Entries without an AMR count as rejected ("no-amr"). Output does not
/// depend on `jobs`.
ConvertResult convert_corpus(const std::vector<AmrEntry>& entries, const PipelineConfig& config,
                             std::size_t jobs = 1);

/// "projective", "fixed-tree", "exact" or "type-unaware"; throws
/// std::invalid_argument otherwise.
Decoder decoder_named(const std::string& name);

struct ParseOptions {
  std::string decoder = "projective";
  DecodeOptions decode;
  bool retry_decrement = true;
};

struct ParsedSentence {
  AsGraph amr;
  bool ok = false;  // false: dummy graph
  std::string status;  // status_name() or "error"
  std::string error;
  std::optional<DecodeResult> result;
};

inline constexpr const char* kDummyLabel = "amr-empty";

AsGraph dummy_graph();

/// Evaluated graph of a decoded tree with LEX filled, leftover sources and
/// unlabeled nodes dropped, placeholders expanded.
AsGraph tree_to_amr(const AmDepTree& relexicalized, const std::vector<PreRecord>& records);

ParsedSentence parse_sentence(const CountScorer& scorer, const std::vector<Token>& tokens,
                              const ParseOptions& options);
ParsedSentence parse_table(const ScoreTable& table, const ParseOptions& options);

struct ParseStats {
  std::size_t sentences = 0;
  std::map<std::string, std::size_t> status;  // status -> count
  std::optional<std::size_t> supertags_correct, supertags_total;
  std::optional<double> smatch_precision, smatch_recall, smatch_f;

  std::optional<double> supertag_accuracy() const;
  std::string to_text() const;
};

/// Tokens whose delexicalised supertag renders identically (bottom equals
/// bottom). Throws std::invalid_argument on length mismatch.
std::pair<std::size_t, std::size_t> supertag_agreement(const AmDepTree& predicted, const AmDepTree& gold);

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace am
