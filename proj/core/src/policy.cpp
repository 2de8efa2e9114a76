#include "am/policy.hpp"

#include <cctype>

#include "am/error.hpp"
#include "json.hpp"

namespace am {

using nlohmann::json;

std::optional<int> arg_index(std::string_view label) {
  if (label.size() < 4 || label.substr(0, 3) != "ARG") return std::nullopt;
  int v = 0;
  for (char c : label.substr(3)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

const OwnershipRule& BlobPolicy::rule(std::string_view label) const {
  if (auto it = labels.find(std::string(label)); it != labels.end()) return it->second;
  for (const auto& [prefix, r] : families) {
    if (label.size() <= prefix.size() || label.substr(0, prefix.size()) != prefix) continue;
    bool digits = true;
    for (char c : label.substr(prefix.size())) digits = digits && std::isdigit(static_cast<unsigned char>(c));
    if (digits) return r;
  }
  return fallback;
}

BlobPolicy BlobPolicy::defaults() {
  BlobPolicy p;
  p.families["ARG"] = {Owner::kSource, Naming::kArgument, ""};
  p.families["op"] = {Owner::kSource, Naming::kIndexed, ""};
  p.families["snt"] = {Owner::kSource, Naming::kIndexed, ""};
  p.labels["domain"] = {Owner::kSource, Naming::kFixed, "s"};
  p.labels["name"] = {Owner::kSource, Naming::kFixed, "name"};
  for (const char* l : {"manner", "mod", "time", "location", "poss", "degree", "quant", "purpose",
                        "polarity", "duration", "frequency", "cause", "condition", "topic", "part"})
    p.labels[l] = {Owner::kTarget, Naming::kFixed, "m"};
  p.fallback = {Owner::kTarget, Naming::kFixed, "m"};
  return p;
}

AlignerWeights AlignerWeights::defaults() {
  AlignerWeights w;
  w.rules = {
      {"not", "-", 9.0},        {"n't", "-", 9.0},         {"no", "-", 9.0},
      {"never", "-", 9.0},      {"if", "have-condition-91", 9.0},
      {"otherwise", "have-condition-91", 9.0},
      {"but", "contrast-01", 9.0}, {"because", "cause-01", 9.0},
      {"can", "possible-01", 9.0}, {"could", "possible-01", 9.0},
      {"must", "obligate-01", 9.0}, {"should", "recommend-01", 9.0},
      {"he", "he", 9.0},        {"him", "he", 9.0},        {"his", "he", 9.0},
      {"she", "she", 9.0},      {"her", "she", 9.0},       {"i", "i", 9.0},
      {"me", "i", 9.0},         {"my", "i", 9.0},          {"they", "they", 9.0},
      {"them", "they", 9.0},    {"we", "we", 9.0},         {"us", "we", 9.0},
  };
  w.extend = {
      {"name", false, "*", "*", 6.0},
      {"ARG0", true, "*", "person", 5.0},
      {"ARG1", true, "*", "thing", 5.0},
      {"ARG0", true, "*", "thing", 4.5},
  };
  return w;
}

namespace {

Owner owner_from(const std::string& s) {
  if (s == "source") return Owner::kSource;
  if (s == "target") return Owner::kTarget;
  throw ParseError("owner must be \"source\" or \"target\", got \"" + s + "\"", 0);
}

Naming naming_from(const std::string& s) {
  if (s == "fixed") return Naming::kFixed;
  if (s == "indexed") return Naming::kIndexed;
  if (s == "argument") return Naming::kArgument;
  throw ParseError("unknown naming \"" + s + "\"", 0);
}

OwnershipRule rule_from(const json& j, OwnershipRule r) {
  if (j.contains("owner")) r.owner = owner_from(j.at("owner").get<std::string>());
  if (j.contains("naming")) r.naming = naming_from(j.at("naming").get<std::string>());
  if (j.contains("source")) r.source = j.at("source").get<std::string>();
  return r;
}

json rule_to(const OwnershipRule& r) {
  static const char* namings[] = {"fixed", "indexed", "argument"};
  json j{{"owner", r.owner == Owner::kSource ? "source" : "target"},
         {"naming", namings[static_cast<int>(r.naming)]}};
  if (r.naming == Naming::kFixed) j["source"] = r.source;
  return j;
}

}  // namespace

PipelineConfig read_pipeline_config(std::string_view json_text) {
  PipelineConfig c;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  try {
    if (j.contains("policy")) {
      const json& p = j.at("policy");
      if (p.contains("replace") && p.at("replace").get<bool>()) c.policy = BlobPolicy{};
      if (p.contains("default")) c.policy.fallback = rule_from(p.at("default"), c.policy.fallback);
      if (p.contains("families"))
        for (const auto& [k, v] : p.at("families").items())
          c.policy.families[k] = rule_from(v, c.policy.families[k]);
      if (p.contains("labels"))
        for (const auto& [k, v] : p.at("labels").items())
          c.policy.labels[k] = rule_from(v, c.policy.labels[k]);
    }
    if (j.contains("aligner")) {
      const json& a = j.at("aligner");
      AlignerWeights& w = c.aligner;
      auto num = [&](const char* key, double& field) {
        if (a.contains(key)) field = a.at(key).get<double>();
      };
      num("exact", w.exact);
      num("rule", w.rule);
      num("stem", w.stem);
      num("prefix", w.prefix);
      num("neighbour_bonus", w.neighbour_bonus);
      num("conflict_penalty", w.conflict_penalty);
      num("extend_constant", w.extend_constant);
      if (a.contains("min_prefix")) w.min_prefix = a.at("min_prefix").get<std::size_t>();
      if (a.contains("neighbour_window")) w.neighbour_window = a.at("neighbour_window").get<std::size_t>();
      if (a.contains("rules")) {
        w.rules.clear();
        for (const auto& r : a.at("rules"))
          w.rules.push_back({r.at("word").get<std::string>(), r.at("label").get<std::string>(),
                             r.value("score", w.rule)});
      }
      if (a.contains("extend")) {
        w.extend.clear();
        for (const auto& r : a.at("extend"))
          w.extend.push_back({r.value("edge", std::string("*")), r.value("dir", std::string("out")) == "out",
                              r.value("from", std::string("*")), r.value("to", std::string("*")),
                              r.at("score").get<double>()});
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad pipeline config: ") + e.what(), 0);
  }
  return c;
}

std::string write_pipeline_config(const PipelineConfig& c) {
  json p;
  p["default"] = rule_to(c.policy.fallback);
  for (const auto& [k, r] : c.policy.families) p["families"][k] = rule_to(r);
  for (const auto& [k, r] : c.policy.labels) p["labels"][k] = rule_to(r);
  const AlignerWeights& w = c.aligner;
  json a{{"exact", w.exact},
         {"rule", w.rule},
         {"stem", w.stem},
         {"prefix", w.prefix},
         {"min_prefix", w.min_prefix},
         {"neighbour_bonus", w.neighbour_bonus},
         {"neighbour_window", w.neighbour_window},
         {"conflict_penalty", w.conflict_penalty},
         {"extend_constant", w.extend_constant}};
  a["rules"] = json::array();
  for (const auto& r : w.rules) a["rules"].push_back({{"word", r.word}, {"label", r.label}, {"score", r.score}});
  a["extend"] = json::array();
  for (const auto& r : w.extend)
    a["extend"].push_back({{"edge", r.edge}, {"dir", r.outgoing ? "out" : "in"}, {"from", r.from},
                           {"to", r.to}, {"score", r.score}});
  return json{{"policy", p}, {"aligner", a}}.dump(2) + "\n";
}

}  // namespace am
