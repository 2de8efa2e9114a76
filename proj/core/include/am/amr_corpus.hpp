#pragma once

// AMR corpus files: blocks of `# ::key value` comment lines followed by a
// PENMAN graph, separated by blank lines. `::snt` holds the whitespace
// tokenised sentence, `::pos` optional tags, `::id` an identifier.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "am/amdep.hpp"
#include "am/asgraph.hpp"

namespace am {

struct AmrEntry {
  std::string id;
  std::vector<Token> tokens;
  std::optional<AsGraph> amr;  // absent for raw sentences to parse
  std::size_t line = 0;        // first line of the block
};

struct CorpusIssue {
  std::size_t line = 0;
  std::string id;
  std::string message;
};

/// Blocks whose PENMAN fails to parse are skipped and reported in `issues`;
/// a block without `::snt` raises FormatError.
std::vector<AmrEntry> read_amr_corpus(std::string_view text, std::vector<CorpusIssue>* issues = nullptr);
std::string write_amr_corpus(const std::vector<AmrEntry>& entries);

std::vector<std::string> split_ws(std::string_view text);

}  // namespace am
