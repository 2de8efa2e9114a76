#pragma once

// Named entities, dates and numbers are collapsed into single NAME / DATE /
// NUMBER tokens (and nodes), wiki edges are dropped. Records keep what is
// needed to expand the placeholders again after parsing.

#include <optional>
#include <string>
#include <vector>

#include "am/amdep.hpp"
#include "am/asgraph.hpp"

namespace am {

struct PreRecord {
  enum class Kind { kName, kDate, kNumber };
  Kind kind = Kind::kNumber;
  std::size_t token = 0;            // 1-based position in the collapsed sentence
  std::vector<std::string> words;   // original tokens of the span
  std::vector<std::pair<std::string, std::string>> attributes;  // role, value

  friend bool operator==(const PreRecord&, const PreRecord&) = default;
};

const char* kind_token(PreRecord::Kind kind);

/// Name spans seen in training, matched longest-first at parse time.
class NameGazetteer {
 public:
  void add(const std::vector<std::string>& words);
  /// Length of the longest entry starting at `pos`, 0 if none.
  std::size_t match(const std::vector<Token>& tokens, std::size_t pos) const;
  const std::vector<std::vector<std::string>>& entries() const noexcept { return entries_; }

 private:
  std::vector<std::vector<std::string>> entries_;
};

struct Preprocessed {
  std::vector<Token> tokens;
  std::optional<AsGraph> amr;
  std::vector<PreRecord> records;
  std::size_t wiki_removed = 0;
};

/// With an AMR, collapsing follows the graph: `name` nodes whose :opN
/// strings occur as a token span, date-entity nodes whose year/month/day
/// spell an ISO date token, numeric constants equal to a token. Without an
/// AMR, regular expressions find dates and numbers and the gazetteer finds
/// names. Inputs that match nothing pass through unchanged.
Preprocessed preprocess(const std::vector<Token>& tokens, const AsGraph* amr,
                        const NameGazetteer* gazetteer = nullptr);

/// Label given to the lexical node of a collapsed token before evaluation,
/// e.g. "NAME@3"; postprocess() expands such nodes.
std::string marker_label(const PreRecord& record);

/// Expands marker nodes into name / date-entity subgraphs and numbers.
/// Plain NAME / DATE / NUMBER labels without a record stay as they are.
AsGraph postprocess(const AsGraph& graph, const std::vector<PreRecord>& records);

/// Drops `:wiki` edges and what hangs off them; returns how many were removed.
std::size_t remove_wiki(AsGraph& g);

}  // namespace am
