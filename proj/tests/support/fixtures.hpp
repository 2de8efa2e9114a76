#pragma once

// Worked example: "the writer wants to sleep soundly".

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "am/amdep.hpp"
#include "am/asgraph.hpp"

#ifndef AMPARSE_DATA_DIR
#error "AMPARSE_DATA_DIR must be defined"
#endif

namespace fixture {

inline const char* kWant = "(u<root> / want :ARG0 (v<s>) :ARG1 (w<o(s)>))";
inline const char* kWriter = "(p<root> / person :ARG0-of (w / write))";
inline const char* kSleep = "(x<root> / sleep :ARG0 (y<s>))";
inline const char* kSound = "(s1<root> / sound :manner-of (s2<m>))";
inline const char* kGoldAmr =
    "(w / want :ARG0 (p / person :ARG0-of (wr / write)) :ARG1 (sl / sleep :ARG0 p :manner (so / sound)))";

inline am::AmDepTree writer_tree() {
  am::AmDepTree t;
  t.tokens = {{"the", "DT"}, {"writer", "NN"}, {"wants", "VBZ"}, {"to", "TO"}, {"sleep", "VB"}, {"soundly", "RB"}};
  t.supertags = {std::nullopt, am::parse_asgraph(kWriter), am::parse_asgraph(kWant), std::nullopt,
                 am::parse_asgraph(kSleep), am::parse_asgraph(kSound)};
  t.lexlabels.assign(6, std::nullopt);
  t.heads = {3, 3, 0, 3, 3, 5};
  t.labels = {am::EdgeOp::ignore(), am::EdgeOp::apply("s"), std::nullopt, am::EdgeOp::ignore(),
              am::EdgeOp::apply("o"), am::EdgeOp::modify("m")};
  return t;
}

inline std::string data_path(const std::string& name) { return std::string(AMPARSE_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data(const std::string& name) { return slurp(data_path(name)); }

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("amparse-test-" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace fixture
