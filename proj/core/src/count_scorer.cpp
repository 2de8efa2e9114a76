#include "am/count_scorer.hpp"

#include <algorithm>
#include <cmath>

#include "am/amr_corpus.hpp"
#include "am/error.hpp"
#include "json.hpp"

namespace am {

using nlohmann::json;

namespace {

const std::string kBottomKey = "_|_";
const Token kRootToken{"<ROOT>", "ROOT"};

std::string join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += '\t';
    out += p;
  }
  return out;
}

}  // namespace

int distance_bucket(std::size_t head, std::size_t dep) {
  if (head == 0) return 0;
  long d = static_cast<long>(dep) - static_cast<long>(head);
  long a = std::labs(d);
  int b = a <= 3 ? static_cast<int>(a) : a <= 5 ? 4 : 6;
  return d < 0 ? -b : b;
}

CountScorer CountScorer::train(const Treebank& tb, ScorerOptions options) {
  CountScorer s;
  s.options_ = options;
  for (const auto& entry : tb.sentences) {
    for (const auto& c : entry.comments) {
      if (c.rfind("::pre NAME ", 0) != 0) continue;
      auto words = split_ws(c.substr(11));
      if (words.size() >= 2) s.gazetteer_.add({words.begin() + 1, words.end()});
    }
    const AmDepTree& t = entry.tree;
    const std::size_t n = t.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Token& tok = t.tokens[i];
      std::string key = kBottomKey;
      if (t.supertags[i]) {
        key = render_asgraph(*t.supertags[i]);
        s.graphs_.emplace(key, *t.supertags[i]);
      }
      s.tag_global_.add(key);
      s.tag_pos_[tok.pos].add(key);
      s.tag_form_[lower_form(tok.form)].add(key);
      if (t.lexlabels[i]) s.lexicon_.add(tok.form, *t.lexlabels[i]);
    }
    for (std::size_t d = 1; d <= n; ++d) {
      const Token& dt = t.tokens[d - 1];
      for (std::size_t h = 0; h <= n; ++h) {
        if (h == d) continue;
        const Token& ht = h == 0 ? kRootToken : t.tokens[h - 1];
        const std::string outcome = t.heads[d - 1] == h ? "1" : "0";
        const std::string b = std::to_string(distance_bucket(h, d));
        s.arc_global_.add(outcome);
        s.arc_coarse_[b].add(outcome);
        s.arc_pos_[join({ht.pos, dt.pos, b})].add(outcome);
        s.arc_lex_[join({lower_form(ht.form), lower_form(dt.form), b})].add(outcome);
      }
      std::size_t h = t.heads[d - 1];
      if (h == 0 || !t.labels[d - 1]) continue;
      const Token& ht = t.tokens[h - 1];
      const std::string op = t.labels[d - 1]->str();
      const std::string dir = d > h ? "R" : "L";
      s.label_global_.add(op);
      s.label_dir_[dir].add(op);
      s.label_pos_[join({ht.pos, dt.pos, dir})].add(op);
      s.label_lex_[join({lower_form(ht.form), lower_form(dt.form), dir})].add(op);
    }
  }
  return s;
}

namespace {

double interpolate(double count, double total, double alpha, double coarse) {
  return (count + alpha * coarse) / (total + alpha);
}

}  // namespace

double CountScorer::supertag_prob(const std::string& form, const std::string& pos, const std::string& tag) const {
  const double vocab = static_cast<double>(graphs_.size() + 1);
  double p = (tag_global_.get(tag) + options_.lambda) / (tag_global_.total + options_.lambda * vocab);
  if (auto it = tag_pos_.find(pos); it != tag_pos_.end())
    p = interpolate(it->second.get(tag), it->second.total, options_.alpha, p);
  if (auto it = tag_form_.find(lower_form(form)); it != tag_form_.end())
    p = interpolate(it->second.get(tag), it->second.total, options_.alpha, p);
  return p;
}

double CountScorer::arc_prob(const Token& h, const Token& d, int bucket) const {
  const std::string b = std::to_string(bucket);
  double p = (arc_global_.get("1") + options_.lambda) / (arc_global_.total + 2 * options_.lambda);
  if (auto it = arc_coarse_.find(b); it != arc_coarse_.end())
    p = interpolate(it->second.get("1"), it->second.total, options_.alpha, p);
  if (auto it = arc_pos_.find(join({h.pos, d.pos, b})); it != arc_pos_.end())
    p = interpolate(it->second.get("1"), it->second.total, options_.alpha, p);
  if (auto it = arc_lex_.find(join({lower_form(h.form), lower_form(d.form), b})); it != arc_lex_.end())
    p = interpolate(it->second.get("1"), it->second.total, options_.alpha, p);
  return p;
}

double CountScorer::label_prob(const Token& h, const Token& d, bool rightward, const std::string& op) const {
  const std::string dir = rightward ? "R" : "L";
  const double vocab = static_cast<double>(std::max<std::size_t>(label_global_.by.size(), 1));
  double p = (label_global_.get(op) + options_.lambda) / (label_global_.total + options_.lambda * vocab);
  if (auto it = label_dir_.find(dir); it != label_dir_.end())
    p = interpolate(it->second.get(op), it->second.total, options_.alpha, p);
  if (auto it = label_pos_.find(join({h.pos, d.pos, dir})); it != label_pos_.end())
    p = interpolate(it->second.get(op), it->second.total, options_.alpha, p);
  if (auto it = label_lex_.find(join({lower_form(h.form), lower_form(d.form), dir})); it != label_lex_.end())
    p = interpolate(it->second.get(op), it->second.total, options_.alpha, p);
  return p;
}

ScoreTable CountScorer::score_sentence(const std::vector<Token>& tokens, std::size_t k) const {
  ScoreTable table(tokens);
  const std::size_t n = tokens.size();
  for (std::size_t i = 1; i <= n; ++i) {
    const Token& tok = tokens[i - 1];
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& [key, g] : graphs_) ranked.emplace_back(supertag_prob(tok.form, tok.pos, key), key);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    if (ranked.size() > k) ranked.resize(k);
    auto lex = lexicon_.most_frequent(tok.form);
    for (const auto& [p, key] : ranked) table.add_candidate(i, SupertagCandidate::of(graphs_.at(key), std::log(p), lex));
    table.add_candidate(i, SupertagCandidate::bottom(std::log(supertag_prob(tok.form, tok.pos, kBottomKey))));
  }
  for (std::size_t d = 1; d <= n; ++d)
    for (std::size_t h = 0; h <= n; ++h) {
      if (h == d) continue;
      const Token& ht = h == 0 ? kRootToken : tokens[h - 1];
      table.set_edge(h, d, std::log(arc_prob(ht, tokens[d - 1], distance_bucket(h, d))));
      if (h == 0) continue;
      for (const auto& [op, c] : label_global_.by)
        table.set_label(h, d, EdgeOp::parse(op), std::log(label_prob(ht, tokens[d - 1], d > h, op)));
    }
  const double vocab = static_cast<double>(std::max<std::size_t>(label_global_.by.size(), 1));
  table.label_default = std::log(options_.lambda / (label_global_.total + options_.lambda * vocab));
  return table;
}

namespace {

json counts_json(const std::map<std::string, double>& by) {
  json j = json::object();
  for (const auto& [k, v] : by) j[k] = v;
  return j;
}

}  // namespace

std::string CountScorer::to_json() const {
  auto counts = [](const Counts& c) { return counts_json(c.by); };
  auto table = [&](const Table& t) {
    json j = json::object();
    for (const auto& [k, c] : t) j[k] = counts(c);
    return j;
  };
  json j;
  j["options"] = {{"lambda", options_.lambda}, {"alpha", options_.alpha}};
  j["supertags"] = json::array();
  for (const auto& [key, g] : graphs_) j["supertags"].push_back(key);
  j["tag_global"] = counts(tag_global_);
  j["tag_pos"] = table(tag_pos_);
  j["tag_form"] = table(tag_form_);
  j["arc_global"] = counts(arc_global_);
  j["arc_coarse"] = table(arc_coarse_);
  j["arc_pos"] = table(arc_pos_);
  j["arc_lex"] = table(arc_lex_);
  j["label_global"] = counts(label_global_);
  j["label_dir"] = table(label_dir_);
  j["label_pos"] = table(label_pos_);
  j["label_lex"] = table(label_lex_);
  json lex = json::object();
  for (const auto& [form, labels] : lexicon_.counts())
    for (const auto& [label, c] : labels) lex[form][label] = c;
  j["lexicon"] = lex;
  j["gazetteer"] = gazetteer_.entries();
  return j.dump() + "\n";
}

CountScorer CountScorer::from_json(std::string_view text) {
  CountScorer s;
  try {
    json j = json::parse(text);
    s.options_.lambda = j.at("options").at("lambda").get<double>();
    s.options_.alpha = j.at("options").at("alpha").get<double>();
    for (const auto& key : j.at("supertags")) {
      std::string k = key.get<std::string>();
      s.graphs_.emplace(k, parse_asgraph(k));
    }
    auto counts = [](const json& c) {
      Counts out;
      for (const auto& [k, v] : c.items()) out.add(k, v.get<double>());
      return out;
    };
    auto table = [&](const json& t) {
      Table out;
      for (const auto& [k, v] : t.items()) out[k] = counts(v);
      return out;
    };
    s.tag_global_ = counts(j.at("tag_global"));
    s.tag_pos_ = table(j.at("tag_pos"));
    s.tag_form_ = table(j.at("tag_form"));
    s.arc_global_ = counts(j.at("arc_global"));
    s.arc_coarse_ = table(j.at("arc_coarse"));
    s.arc_pos_ = table(j.at("arc_pos"));
    s.arc_lex_ = table(j.at("arc_lex"));
    s.label_global_ = counts(j.at("label_global"));
    s.label_dir_ = table(j.at("label_dir"));
    s.label_pos_ = table(j.at("label_pos"));
    s.label_lex_ = table(j.at("label_lex"));
    for (const auto& [form, labels] : j.at("lexicon").items())
      for (const auto& [label, c] : labels.items()) s.lexicon_.add(form, label, c.get<std::size_t>());
    for (const auto& e : j.at("gazetteer")) s.gazetteer_.add(e.get<std::vector<std::string>>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad scorer model: ") + e.what(), 0);
  }
  return s;
}

}  // namespace am
