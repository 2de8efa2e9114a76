#pragma once

// Decoders from score tables to well-typed AM dependency trees.

#include <cstddef>
#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "am/score_table.hpp"

namespace am {

enum class DecodeStatus { kExactGoal, kOpenSourceFallback, kSubtreeFallback };

const char* status_name(DecodeStatus status);

struct DecodeStats {
  std::size_t items = 0;           // chart items created
  std::size_t distinct_types = 0;  // distinct subtree types among items
  std::size_t distinct_states = 0;
};

struct DecodeResult {
  AmDepTree tree;
  std::vector<std::size_t> choices;  // candidate index per token
  double score = 0.0;
  DecodeStatus status = DecodeStatus::kExactGoal;
  std::size_t open_sources = 0;
  DecodeStats stats;
};

struct DecodeOptions {
  /// Non-bottom supertags kept per token.
  std::size_t k = 4;
  /// Abort with DecodeTimeout once this many items exist (0: unlimited).
  std::size_t max_items = 0;
  /// Abort with DecodeTimeout after this many seconds (0: unlimited).
  double time_limit = 0.0;
  /// Exact decoding refuses longer sentences.
  std::size_t guard_n = 10;
  /// Exact decoding only: allowed[h][d] restricts heads (h = 0 is ROOT).
  const std::vector<std::vector<char>>* allowed = nullptr;
};

/// Unlabeled tree as heads[d-1] = h.
using Skeleton = std::vector<std::size_t>;

/// Maximum arborescence over E with exactly one edge leaving the virtual
/// root. Edges scoring -infinity are unavailable. Ties prefer lower indices.
/// Throws DecodeError if no arborescence exists.
Skeleton cle_arborescence(const ScoreTable& table);
Skeleton cle_arborescence(const std::vector<std::vector<double>>& scores);

DecodeResult projective_decode(const ScoreTable& table, const DecodeOptions& options = {});
DecodeResult fixed_tree_decode(const ScoreTable& table, const DecodeOptions& options = {});
DecodeResult fixed_tree_decode(const ScoreTable& table, const Skeleton& skeleton,
                               const DecodeOptions& options = {});
DecodeResult exact_decode(const ScoreTable& table, const DecodeOptions& options = {});
DecodeResult type_unaware_decode(const ScoreTable& table, const DecodeOptions& options = {});

using Decoder = std::function<DecodeResult(const ScoreTable&, const DecodeOptions&)>;

/// Runs `decoder`, retrying with k-1 (down to 1) whenever it times out.
DecodeResult decode_with_retry(const Decoder& decoder, const ScoreTable& table,
                               DecodeOptions options);

/// Digraph on nodes 1..n as a list of arcs.
struct Digraph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
};

/// Lines "i k" (one arc each), optional "n N" to fix the node count,
/// '#' comments. Without "n", n is the largest index. Throws FormatError.
Digraph read_digraph(std::string_view text);

/// Score table whose best well-typed tree scores n-1 exactly when the
/// digraph has a Hamiltonian path ending at node n.
ScoreTable build_hamiltonian_instance(const Digraph& g);

bool has_hamiltonian_path_to_last(const Digraph& g);

struct HamiltonianVerdict {
  bool yes = false;
  double score = 0.0;
  DecodeResult result;
};

HamiltonianVerdict decide_hamiltonian(const Digraph& g);

}  // namespace am
