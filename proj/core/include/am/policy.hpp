#pragma once

// Configuration of the conversion pipeline: which endpoint of an AMR edge
// owns it during blob decomposition, how placeholder sources are named, and
// the aligner's heuristic weights. Loaded from JSON; defaults are built in.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace am {

enum class Owner { kSource, kTarget };

enum class Naming {
  kFixed,     // the rule's source name
  kIndexed,   // lower-cased prefix plus the label's number: op1, snt2
  kArgument,  // s / o / o2 ... with object promotion and unaccusatives
};

struct OwnershipRule {
  Owner owner = Owner::kTarget;
  Naming naming = Naming::kFixed;
  std::string source = "m";
};

struct BlobPolicy {
  /// Exact edge labels (as stored, i.e. after undoing `-of` inversion).
  std::map<std::string, OwnershipRule> labels;
  /// Label families matched as prefix + digits, e.g. ARG0, op3.
  std::map<std::string, OwnershipRule> families;
  OwnershipRule fallback;

  const OwnershipRule& rule(std::string_view label) const;
  Owner owner(std::string_view label) const { return rule(label).owner; }

  static BlobPolicy defaults();
};

/// Number of an ARGi label, if it is one.
std::optional<int> arg_index(std::string_view label);

struct AlignRule {
  std::string word;   // lower-cased token
  std::string label;  // node label
  double score = 0.0;
};

struct ExtendRule {
  std::string edge;  // "*" matches any label
  bool outgoing = true;  // edge leaves the already aligned node
  std::string from = "*";
  std::string to = "*";
  double score = 0.0;
};

struct AlignerWeights {
  double exact = 10.0;
  double rule = 9.0;
  double stem = 8.0;
  double prefix = 6.0;
  std::size_t min_prefix = 4;
  double neighbour_bonus = 0.5;
  std::size_t neighbour_window = 2;
  double conflict_penalty = 0.25;
  double extend_constant = 4.0;
  std::vector<AlignRule> rules;
  std::vector<ExtendRule> extend;

  static AlignerWeights defaults();
};

struct PipelineConfig {
  BlobPolicy policy = BlobPolicy::defaults();
  AlignerWeights aligner = AlignerWeights::defaults();
};

/// Missing keys keep their defaults. Throws ParseError.
PipelineConfig read_pipeline_config(std::string_view json_text);
std::string write_pipeline_config(const PipelineConfig& config);

}  // namespace am
