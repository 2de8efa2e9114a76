#include "am/amr_corpus.hpp"

#include <sstream>

#include "am/error.hpp"

namespace am {

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

namespace {

struct Block {
  std::size_t line = 0;
  std::vector<std::pair<std::size_t, std::string>> comments;
  std::string graph;
  std::size_t graph_line = 0;
};

AmrEntry finish(const Block& b, std::vector<CorpusIssue>* issues, bool& ok) {
  AmrEntry e;
  e.line = b.line;
  std::vector<std::string> forms, tags;
  bool have_snt = false;
  for (const auto& [line, c] : b.comments) {
    std::string_view v = c;
    auto take = [&](std::string_view key) -> std::optional<std::string> {
      std::string k = "::" + std::string(key);
      if (v.substr(0, k.size()) != k) return std::nullopt;
      if (v.size() > k.size() && v[k.size()] != ' ' && v[k.size()] != '\t') return std::nullopt;
      std::string rest(v.substr(k.size()));
      auto b0 = rest.find_first_not_of(" \t");
      return b0 == std::string::npos ? std::string() : rest.substr(b0);
    };
    if (auto s = take("snt")) {
      forms = split_ws(*s);
      have_snt = true;
    } else if (auto p = take("pos")) {
      tags = split_ws(*p);
      if (!tags.empty() && tags.size() != forms.size() && have_snt)
        throw FormatError("::pos has " + std::to_string(tags.size()) + " tags for " +
                              std::to_string(forms.size()) + " tokens",
                          line);
    } else if (auto id = take("id")) {
      e.id = *id;
    }
  }
  if (!have_snt) throw FormatError("block without ::snt line", b.line);
  if (!tags.empty() && tags.size() != forms.size())
    throw FormatError("::pos length differs from ::snt", b.line);
  for (std::size_t i = 0; i < forms.size(); ++i)
    e.tokens.push_back(Token{forms[i], tags.empty() ? "_" : tags[i]});
  ok = true;
  if (!b.graph.empty()) {
    try {
      e.amr = parse_amr(b.graph);
    } catch (const ParseError& err) {
      ok = false;
      if (issues) issues->push_back(CorpusIssue{b.graph_line, e.id, err.what()});
    }
  }
  return e;
}

}  // namespace

std::vector<AmrEntry> read_amr_corpus(std::string_view text, std::vector<CorpusIssue>* issues) {
  std::vector<AmrEntry> out;
  Block cur;
  bool open = false;
  auto flush = [&] {
    if (!open) return;
    bool ok = false;
    AmrEntry e = finish(cur, issues, ok);
    if (ok) out.push_back(std::move(e));
    cur = Block{};
    open = false;
  };
  std::size_t lineno = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      flush();
      continue;
    }
    if (!open) {
      open = true;
      cur.line = lineno;
    }
    if (line[0] == '#') {
      if (!cur.graph.empty()) throw FormatError("comment inside a graph", lineno);
      std::string_view c = line.substr(1);
      while (!c.empty() && c.front() == ' ') c.remove_prefix(1);
      cur.comments.emplace_back(lineno, std::string(c));
    } else {
      if (cur.graph.empty()) cur.graph_line = lineno;
      cur.graph += line;
      cur.graph += '\n';
    }
  }
  flush();
  return out;
}

std::string write_amr_corpus(const std::vector<AmrEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    if (!e.id.empty()) out += "# ::id " + e.id + "\n";
    out += "# ::snt";
    for (const auto& t : e.tokens) out += " " + t.form;
    out += "\n";
    bool tagged = false;
    for (const auto& t : e.tokens) tagged = tagged || t.pos != "_";
    if (tagged) {
      out += "# ::pos";
      for (const auto& t : e.tokens) out += " " + t.pos;
      out += "\n";
    }
    if (e.amr) out += render_amr(*e.amr) + "\n";
    out += "\n";
  }
  return out;
}

}  // namespace am
