#include "am/treebank.hpp"

#include <sstream>

#include "am/error.hpp"

namespace am {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

void finish(Treebank& tb, TreebankEntry& cur, std::vector<std::size_t>& rows,
            std::size_t line_no, bool& open) {
  if (!open) return;
  for (std::size_t i = 0; i < cur.tree.heads.size(); ++i)
    if (cur.tree.heads[i] > cur.tree.size())
      throw FormatError("dangling head " + std::to_string(cur.tree.heads[i]), rows[i]);
  try {
    validate_structure(cur.tree);
  } catch (const StructureError& e) {
    throw FormatError(e.what(), line_no);
  }
  tb.sentences.push_back(std::move(cur));
  cur = TreebankEntry{};
  rows.clear();
  open = false;
}

}  // namespace

Treebank read_treebank(std::string_view text) {
  Treebank tb;
  TreebankEntry cur;
  bool open = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::size_t> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finish(tb, cur, rows, line_no - 1, open);
      continue;
    }
    if (line[0] == '#') {
      if (open && !cur.tree.tokens.empty())
        throw FormatError("comment inside a sentence", line_no);
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body.erase(0, 1);
      cur.comments.push_back(body);
      open = true;
      continue;
    }
    auto cols = split_tabs(line);
    if (cols.size() != 7)
      throw FormatError("expected 7 columns, found " + std::to_string(cols.size()), line_no);
    rows.push_back(line_no);
    open = true;
    std::size_t expected = cur.tree.size() + 1;
    if (cols[0] != std::to_string(expected))
      throw FormatError("expected token id " + std::to_string(expected), line_no);
    cur.tree.tokens.push_back(Token{cols[1], cols[2]});
    if (cols[3] == "_|_") {
      cur.tree.supertags.emplace_back();
    } else {
      try {
        cur.tree.supertags.emplace_back(parse_asgraph(cols[3]));
      } catch (const Error& e) {
        throw FormatError(std::string("bad supertag: ") + e.what(), line_no);
      }
    }
    cur.tree.lexlabels.push_back(cols[4] == "_" ? std::nullopt : std::optional<std::string>(cols[4]));
    std::size_t head = 0;
    try {
      std::size_t used = 0;
      head = std::stoul(cols[5], &used);
      if (used != cols[5].size()) throw std::invalid_argument("junk");
    } catch (const std::exception&) {
      throw FormatError("bad head '" + cols[5] + "'", line_no);
    }
    cur.tree.heads.push_back(head);
    if (cols[6] == "ROOT") {
      if (head != 0) throw FormatError("ROOT label on a non-root edge", line_no);
      cur.tree.labels.emplace_back();
    } else {
      if (head == 0) throw FormatError("root edge must be labeled ROOT", line_no);
      try {
        cur.tree.labels.emplace_back(EdgeOp::parse(cols[6]));
      } catch (const ParseError&) {
        throw FormatError("unknown edge label '" + cols[6] + "'", line_no);
      }
    }
  }
  finish(tb, cur, rows, line_no, open);
  return tb;
}

std::string write_treebank(const Treebank& tb) {
  std::string out;
  for (const auto& entry : tb.sentences) {
    for (const auto& c : entry.comments) out += "# " + c + "\n";
    const AmDepTree& t = entry.tree;
    for (std::size_t i = 0; i < t.size(); ++i) {
      out += std::to_string(i + 1) + "\t" + t.tokens[i].form + "\t" + t.tokens[i].pos + "\t";
      out += t.supertags[i] ? render_asgraph(*t.supertags[i]) : "_|_";
      out += "\t" + t.lexlabels[i].value_or("_");
      out += "\t" + std::to_string(t.heads[i]) + "\t";
      out += t.labels[i] ? t.labels[i]->str() : "ROOT";
      out += "\n";
    }
    out += "\n";
  }
  return out;
}

std::vector<std::string> comment_values(const TreebankEntry& entry, std::string_view key) {
  std::vector<std::string> out;
  std::string prefix = "::" + std::string(key);
  for (const auto& c : entry.comments) {
    if (c.compare(0, prefix.size(), prefix) != 0) continue;
    if (c.size() > prefix.size() && c[prefix.size()] != ' ') continue;
    out.push_back(c.size() > prefix.size() ? c.substr(prefix.size() + 1) : "");
  }
  return out;
}

}  // namespace am
