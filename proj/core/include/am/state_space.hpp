#pragma once

// Interned head states and memoised typing transitions for the decoders.

#include <cstdint>
#include <deque>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "am/amdep.hpp"

namespace am {

using OpId = std::uint32_t;

/// Process-wide dense ids for edge labels.
OpId op_id(const EdgeOp& op);
const EdgeOp& op_from_id(OpId id);
inline constexpr OpId kIgnoreOp = 0;

/// Not thread-safe; decoders use one instance per thread.
class StateSpace {
 public:
  using StateId = std::uint32_t;
  static constexpr StateId kDead = 0xffffffffu;

  StateId intern(const HeadState& state);
  StateId initial(const AmType& supertag_type);
  const HeadState& state(StateId id) const { return states_[id]; }
  bool complete(StateId id) const { return complete_[id]; }
  /// Current type of a state; the subtree type once the state is complete.
  AmType type(StateId id) const { return states_[id].current; }

  StateId attach(StateId state, OpId op, const AmType& child);
  const std::vector<OpId>& candidates(StateId state, const AmType& child);

  std::size_t size() const noexcept { return states_.size(); }

  /// Per-thread instance shared by the decoders.
  static StateSpace& local();

 private:
  struct Key {
    std::uint32_t a, b, c;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = k.a;
      h = h * 0x9E3779B97F4A7C15ULL ^ k.b;
      h = h * 0x9E3779B97F4A7C15ULL ^ k.c;
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };

  std::deque<HeadState> states_;
  std::vector<char> complete_;
  std::unordered_map<std::string, StateId> by_key_;
  std::unordered_map<std::uint32_t, StateId> initial_;
  std::unordered_map<Key, StateId, KeyHash> attach_;
  std::unordered_map<Key, std::vector<OpId>, KeyHash> candidates_;
};

}  // namespace am
