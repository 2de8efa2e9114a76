#include "am/score_table.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "am/error.hpp"

namespace am {

using nlohmann::json;

SupertagCandidate SupertagCandidate::bottom(double score) {
  SupertagCandidate c;
  c.score = score;
  return c;
}

SupertagCandidate SupertagCandidate::of(AsGraph graph, double score,
                                        std::optional<std::string> lexlabel) {
  SupertagCandidate c;
  c.type = type_of(graph);
  c.graph = std::move(graph);
  c.score = score;
  c.lexlabel = std::move(lexlabel);
  return c;
}

ScoreTable::ScoreTable(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  const std::size_t n = tokens_.size();
  supertags_.resize(n);
  edges_.assign((n + 1) * (n + 1), 0.0);
  edge_set_.assign((n + 1) * (n + 1), 0);
  labels_.resize((n + 1) * (n + 1));
}

std::size_t ScoreTable::at(std::size_t i, std::size_t k) const {
  const std::size_t n = size();
  if (i > n || k > n || k == 0) throw DecodeError("edge index out of range");
  return i * (n + 1) + k;
}

void ScoreTable::add_candidate(std::size_t i, SupertagCandidate c) {
  if (i == 0 || i > size()) throw DecodeError("candidate token out of range");
  supertags_[i - 1].push_back(std::move(c));
}

double ScoreTable::edge(std::size_t i, std::size_t k) const {
  std::size_t idx = at(i, k);
  return edge_set_[idx] ? edges_[idx] : edge_default;
}

void ScoreTable::set_edge(std::size_t i, std::size_t k, double score) {
  std::size_t idx = at(i, k);
  edges_[idx] = score;
  edge_set_[idx] = 1;
}

double ScoreTable::label(std::size_t i, std::size_t k, OpId op) const {
  for (const auto& [id, s] : labels_[at(i, k)])
    if (id == op) return s;
  return label_default;
}

void ScoreTable::set_label(std::size_t i, std::size_t k, const EdgeOp& op, double score) {
  auto& list = labels_[at(i, k)];
  OpId id = op_id(op);
  for (auto& [lid, s] : list)
    if (lid == id) {
      s = score;
      return;
    }
  list.emplace_back(id, score);
}

const std::vector<std::pair<OpId, double>>& ScoreTable::listed_labels(std::size_t i,
                                                                        std::size_t k) const {
  return labels_[at(i, k)];
}

std::vector<std::size_t> ScoreTable::kbest(std::size_t i, std::size_t k) const {
  const auto& cands = candidates(i);
  std::vector<std::size_t> good, out;
  for (std::size_t c = 0; c < cands.size(); ++c)
    if (cands[c].graph && cands[c].score != kNegInf) good.push_back(c);
  std::stable_sort(good.begin(), good.end(),
                   [&](std::size_t a, std::size_t b) { return cands[a].score > cands[b].score; });
  if (good.size() > k) good.resize(k);
  std::sort(good.begin(), good.end());
  out = good;
  for (std::size_t c = 0; c < cands.size(); ++c)
    if (!cands[c].graph && cands[c].score != kNegInf) out.push_back(c);
  return out;
}

namespace {

double read_score(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    auto s = v.get<std::string>();
    if (s == "-inf" || s == "-Infinity") return kNegInf;
  }
  throw ParseError("bad score value " + v.dump(), 0);
}

json write_score(double s) {
  if (s == kNegInf) return "-inf";
  return s;
}

ScoreTable from_json(const json& j) {
  std::vector<Token> tokens;
  for (const auto& t : j.at("tokens"))
    tokens.push_back(Token{t.at("form").get<std::string>(), t.value("pos", std::string("_"))});
  ScoreTable table(std::move(tokens));
  const std::size_t n = table.size();
  table.label_default = j.contains("label_default") ? read_score(j["label_default"]) : 0.0;
  table.edge_default = j.contains("edge_default") ? read_score(j["edge_default"]) : 0.0;
  const auto& st = j.at("supertags");
  if (st.size() != n) throw ParseError("supertags list does not match token count", 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& c : st[i]) {
      auto g = c.at("graph").get<std::string>();
      double score = read_score(c.at("score"));
      std::optional<std::string> lex;
      if (c.contains("lexlabel") && c["lexlabel"].is_string()) lex = c["lexlabel"].get<std::string>();
      if (g == "_|_") {
        table.add_candidate(i + 1, SupertagCandidate::bottom(score));
      } else {
        table.add_candidate(i + 1, SupertagCandidate::of(parse_asgraph(g), score, lex));
      }
    }
  }
  if (j.contains("edges"))
    for (const auto& e : j["edges"]) {
      auto i = e.at(0).get<std::size_t>(), k = e.at(1).get<std::size_t>();
      if (i > n || k == 0 || k > n || i == k) throw ParseError("bad edge index", 0);
      table.set_edge(i, k, read_score(e.at(2)));
    }
  if (j.contains("labels"))
    for (const auto& l : j["labels"]) {
      auto i = l.at(0).get<std::size_t>(), k = l.at(1).get<std::size_t>();
      if (i > n || k == 0 || k > n || i == k) throw ParseError("bad label index", 0);
      table.set_label(i, k, EdgeOp::parse(l.at(2).get<std::string>()), read_score(l.at(3)));
    }
  return table;
}

json to_json(const ScoreTable& table) {
  const std::size_t n = table.size();
  json j;
  j["tokens"] = json::array();
  for (const auto& t : table.tokens()) j["tokens"].push_back({{"form", t.form}, {"pos", t.pos}});
  j["supertags"] = json::array();
  for (std::size_t i = 1; i <= n; ++i) {
    json list = json::array();
    for (const auto& c : table.candidates(i)) {
      json o{{"graph", c.graph ? render_asgraph(*c.graph) : "_|_"}, {"score", write_score(c.score)}};
      if (c.lexlabel) o["lexlabel"] = *c.lexlabel;
      list.push_back(o);
    }
    j["supertags"].push_back(list);
  }
  j["edges"] = json::array();
  j["labels"] = json::array();
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t k = 1; k <= n; ++k) {
      if (i == k) continue;
      j["edges"].push_back({i, k, write_score(table.edge(i, k))});
      for (const auto& [op, s] : table.listed_labels(i, k))
        j["labels"].push_back({i, k, op_from_id(op).str(), write_score(s)});
    }
  j["label_default"] = write_score(table.label_default);
  j["edge_default"] = write_score(table.edge_default);
  return j;
}

}  // namespace

ScoreTable read_score_table(std::string_view json_text) {
  try {
    return from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("score table: ") + e.what(), 0);
  }
}

std::string write_score_table(const ScoreTable& table) { return to_json(table).dump(); }

std::vector<ScoreTable> read_score_tables(std::string_view text) {
  std::vector<ScoreTable> out;
  try {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return out;
    if (text[first] == '[') {
      for (const auto& j : json::parse(text)) out.push_back(from_json(j));
      return out;
    }
    // Concatenated objects: one per line or pretty-printed.
    std::istringstream in{std::string(text)};
    while (in >> std::ws && in.peek() != std::char_traits<char>::eof()) {
      json j;
      in >> j;
      out.push_back(from_json(j));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("score table: ") + e.what(), 0);
  }
  return out;
}

double score_tree(const ScoreTable& table, const AmDepTree& tree,
                  const std::vector<std::size_t>& choices) {
  double total = 0.0;
  for (std::size_t i = 1; i <= tree.size(); ++i) {
    total += table.candidates(i).at(choices.at(i - 1)).score;
    std::size_t h = tree.heads[i - 1];
    if (h == 0) continue;
    total += table.edge(h, i) + table.label(h, i, *tree.labels[i - 1]);
  }
  return total;
}

AmDepTree make_tree(const ScoreTable& table, const std::vector<std::size_t>& choices,
                    const std::vector<std::size_t>& heads,
                    const std::vector<std::optional<EdgeOp>>& labels) {
  AmDepTree t;
  const std::size_t n = table.size();
  t.resize(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& c = table.candidates(i).at(choices.at(i - 1));
    t.tokens[i - 1] = table.tokens()[i - 1];
    t.supertags[i - 1] = c.graph;
    t.lexlabels[i - 1] = c.lexlabel;
    t.heads[i - 1] = heads.at(i - 1);
    t.labels[i - 1] = labels.at(i - 1);
  }
  return t;
}

}  // namespace am
