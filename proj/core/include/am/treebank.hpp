#pragma once

// Tab-separated AM treebank files: one token per line with columns
// ID FORM POS SUPERTAG LEXLABEL HEAD EDGE_LABEL, blank line between
// sentences, `#` lines kept as sentence comments.

#include <string>
#include <string_view>
#include <vector>

#include "am/amdep.hpp"

namespace am {

struct TreebankEntry {
  std::vector<std::string> comments;  // without the leading "# "
  AmDepTree tree;
};

struct Treebank {
  std::vector<TreebankEntry> sentences;
};

/// Throws FormatError with the offending line number.
Treebank read_treebank(std::string_view text);
std::string write_treebank(const Treebank& tb);

/// Comment payload for `key`, e.g. "snt" for a "# ::snt ..." line.
std::vector<std::string> comment_values(const TreebankEntry& entry, std::string_view key);

}  // namespace am
