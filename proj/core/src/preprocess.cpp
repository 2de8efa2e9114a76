#include "am/preprocess.hpp"

#include <algorithm>
#include <map>
#include <regex>

namespace am {

const char* kind_token(PreRecord::Kind kind) {
  switch (kind) {
    case PreRecord::Kind::kName: return "NAME";
    case PreRecord::Kind::kDate: return "DATE";
    case PreRecord::Kind::kNumber: return "NUMBER";
  }
  return "NUMBER";
}

void NameGazetteer::add(const std::vector<std::string>& words) {
  if (words.empty()) return;
  if (std::find(entries_.begin(), entries_.end(), words) == entries_.end()) entries_.push_back(words);
}

std::size_t NameGazetteer::match(const std::vector<Token>& tokens, std::size_t pos) const {
  std::size_t best = 0;
  for (const auto& e : entries_) {
    if (e.size() <= best || pos + e.size() > tokens.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < e.size() && ok; ++i) ok = tokens[pos + i].form == e[i];
    if (ok) best = e.size();
  }
  return best;
}

std::size_t remove_wiki(AsGraph& g) {
  std::vector<AsGraph::Edge> wiki;
  for (const auto& e : g.edges())
    if (e.label == "wiki") wiki.push_back(e);
  for (const auto& e : wiki) g.remove_edge(e);
  if (!wiki.empty()) g.prune_disconnected();
  return wiki.size();
}

namespace {

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

bool is_number_label(const std::string& s) {
  return is_constant_label(s) && s.front() != '"' && s != "-" && s != "+";
}

std::string pad2(const std::string& s) { return s.size() == 1 ? "0" + s : s; }

std::string strip_zeros(std::string s) {
  while (s.size() > 1 && s.front() == '0') s.erase(s.begin());
  return s;
}

const std::regex& date_re() {
  static const std::regex re(R"((\d{4})-(\d{2})(?:-(\d{2}))?)");
  return re;
}

const std::regex& number_re() {
  static const std::regex re(R"([+-]?\d+(?:\.\d+)?)");
  return re;
}

struct Span {
  std::size_t begin, end;  // 0-based, half-open, original tokens
  PreRecord record;
};

// Outgoing edges per node.
std::vector<std::vector<std::size_t>> out_edges(const AsGraph& g) {
  std::vector<std::vector<std::size_t>> out(g.node_count());
  for (std::size_t i = 0; i < g.edges().size(); ++i) out[g.edges()[i].from].push_back(i);
  return out;
}

std::vector<Token> collapse(const std::vector<Token>& tokens, std::vector<Span>& spans) {
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.begin < b.begin; });
  std::vector<Token> out;
  std::size_t s = 0;
  for (std::size_t i = 0; i < tokens.size();) {
    if (s < spans.size() && spans[s].begin == i) {
      Span& sp = spans[s++];
      const char* pos = sp.record.kind == PreRecord::Kind::kName ? "NNP" : "CD";
      out.push_back(Token{kind_token(sp.record.kind), pos});
      sp.record.token = out.size();
      i = sp.end;
    } else {
      out.push_back(tokens[i++]);
    }
  }
  return out;
}

void from_graph(const std::vector<Token>& tokens, AsGraph& g, std::vector<Span>& spans) {
  std::vector<char> used(tokens.size(), 0);
  auto find_span = [&](const std::vector<std::string>& words) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i + words.size() <= tokens.size(); ++i) {
      bool ok = true;
      for (std::size_t j = 0; j < words.size() && ok; ++j) ok = !used[i + j] && tokens[i + j].form == words[j];
      if (ok) return i;
    }
    return std::nullopt;
  };
  auto take = [&](std::size_t b, std::size_t e, PreRecord r) {
    for (std::size_t i = b; i < e; ++i) {
      used[i] = 1;
      r.words.push_back(tokens[i].form);
    }
    spans.push_back(Span{b, e, std::move(r)});
  };
  auto out = out_edges(g);
  std::vector<AsGraph::Edge> drop;

  // name nodes: only :opN edges to quoted constants
  for (AsGraph::NodeId u = 0; u < g.node_count(); ++u) {
    if (g.label(u) != std::optional<std::string>("name") || out[u].empty()) continue;
    std::map<int, std::string> ops;
    bool ok = true;
    for (std::size_t ei : out[u]) {
      const auto& e = g.edges()[ei];
      const auto& l = g.label(e.to);
      if (e.label.size() < 3 || e.label.compare(0, 2, "op") != 0 || !l || l->front() != '"') {
        ok = false;
        break;
      }
      ops[std::stoi(e.label.substr(2))] = *l;
    }
    if (!ok) continue;
    std::vector<std::string> words;
    for (const auto& [i, s] : ops) words.push_back(unquote(s));
    auto at = find_span(words);
    if (!at) continue;
    PreRecord r;
    r.kind = PreRecord::Kind::kName;
    for (const auto& [i, s] : ops) r.attributes.emplace_back("op" + std::to_string(i), s);
    take(*at, *at + words.size(), std::move(r));
    g.set_label(u, "NAME");
    for (std::size_t ei : out[u]) drop.push_back(g.edges()[ei]);
  }

  // date-entity nodes spelled as one ISO token
  for (AsGraph::NodeId u = 0; u < g.node_count(); ++u) {
    if (g.label(u) != std::optional<std::string>("date-entity") || out[u].empty()) continue;
    std::map<std::string, std::string> attr;
    bool ok = true;
    for (std::size_t ei : out[u]) {
      const auto& e = g.edges()[ei];
      const auto& l = g.label(e.to);
      if ((e.label != "year" && e.label != "month" && e.label != "day") || !l || !is_number_label(*l)) {
        ok = false;
        break;
      }
      attr[e.label] = *l;
    }
    if (!ok || !attr.count("year") || !attr.count("month")) continue;
    std::string iso = attr["year"] + "-" + pad2(attr["month"]);
    if (attr.count("day")) iso += "-" + pad2(attr["day"]);
    auto at = find_span({iso});
    if (!at) continue;
    PreRecord r;
    r.kind = PreRecord::Kind::kDate;
    for (const char* k : {"year", "month", "day"})
      if (attr.count(k)) r.attributes.emplace_back(k, attr[k]);
    take(*at, *at + 1, std::move(r));
    g.set_label(u, "DATE");
    for (std::size_t ei : out[u]) drop.push_back(g.edges()[ei]);
  }
  for (const auto& e : drop) g.remove_edge(e);
  if (!drop.empty()) g.prune_disconnected();

  // numeric constants equal to a token
  for (AsGraph::NodeId u = 0; u < g.node_count(); ++u) {
    const auto& l = g.label(u);
    if (!l || !is_number_label(*l)) continue;
    auto at = find_span({*l});
    if (!at) continue;
    PreRecord r;
    r.kind = PreRecord::Kind::kNumber;
    r.attributes.emplace_back("value", *l);
    take(*at, *at + 1, std::move(r));
    g.set_label(u, "NUMBER");
  }
}

void from_patterns(const std::vector<Token>& tokens, const NameGazetteer* gazetteer, std::vector<Span>& spans) {
  std::smatch m;
  for (std::size_t i = 0; i < tokens.size();) {
    std::size_t len = gazetteer ? gazetteer->match(tokens, i) : 0;
    PreRecord r;
    if (len > 0) {
      r.kind = PreRecord::Kind::kName;
      for (std::size_t j = 0; j < len; ++j) {
        r.words.push_back(tokens[i + j].form);
        r.attributes.emplace_back("op" + std::to_string(j + 1), "\"" + tokens[i + j].form + "\"");
      }
      spans.push_back(Span{i, i + len, std::move(r)});
      i += len;
      continue;
    }
    const std::string& w = tokens[i].form;
    if (std::regex_match(w, m, date_re())) {
      r.kind = PreRecord::Kind::kDate;
      r.attributes.emplace_back("year", m[1].str());
      r.attributes.emplace_back("month", strip_zeros(m[2].str()));
      if (m[3].matched) r.attributes.emplace_back("day", strip_zeros(m[3].str()));
    } else if (std::regex_match(w, number_re())) {
      r.kind = PreRecord::Kind::kNumber;
      r.attributes.emplace_back("value", w);
    } else {
      ++i;
      continue;
    }
    r.words.push_back(w);
    spans.push_back(Span{i, i + 1, std::move(r)});
    ++i;
  }
}

}  // namespace

Preprocessed preprocess(const std::vector<Token>& tokens, const AsGraph* amr, const NameGazetteer* gazetteer) {
  Preprocessed p;
  std::vector<Span> spans;
  if (amr) {
    AsGraph g = *amr;
    p.wiki_removed = remove_wiki(g);
    from_graph(tokens, g, spans);
    p.amr = std::move(g);
  } else {
    from_patterns(tokens, gazetteer, spans);
  }
  p.tokens = collapse(tokens, spans);
  for (auto& s : spans) p.records.push_back(std::move(s.record));
  return p;
}

std::string marker_label(const PreRecord& record) {
  return std::string(kind_token(record.kind)) + "@" + std::to_string(record.token);
}

AsGraph postprocess(const AsGraph& graph, const std::vector<PreRecord>& records) {
  AsGraph g = graph;
  std::map<std::string, const PreRecord*> by_marker;
  for (const auto& r : records) by_marker[marker_label(r)] = &r;
  const std::size_t n = g.node_count();
  for (AsGraph::NodeId u = 0; u < n; ++u) {
    const auto& l = g.label(u);
    if (!l) continue;
    auto it = by_marker.find(*l);
    if (it == by_marker.end()) continue;
    const PreRecord& r = *it->second;
    switch (r.kind) {
      case PreRecord::Kind::kNumber:
        g.set_label(u, r.attributes.empty() ? r.words.front() : r.attributes.front().second);
        break;
      case PreRecord::Kind::kName:
      case PreRecord::Kind::kDate:
        g.set_label(u, r.kind == PreRecord::Kind::kName ? "name" : "date-entity");
        for (const auto& [role, value] : r.attributes) g.add_edge(u, g.add_node(value), role);
        break;
    }
  }
  return g;
}

}  // namespace am
