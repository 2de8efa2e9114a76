#include "am/state_space.hpp"

#include <memory>

namespace am {

namespace {

struct OpRegistry {
  std::mutex mu;
  std::deque<EdgeOp> ops{EdgeOp::ignore()};
  std::unordered_map<std::string, OpId> ids{{"IGNORE", kIgnoreOp}};
};

OpRegistry& op_registry() {
  static OpRegistry r;
  return r;
}

std::string state_key(const HeadState& s) {
  std::string key = std::to_string(s.initial.id()) + ":" + std::to_string(s.current.id());
  for (const auto& [name, type] : s.pending) key += "|" + name + "=" + std::to_string(type.id());
  return key;
}

}  // namespace

OpId op_id(const EdgeOp& op) {
  OpRegistry& r = op_registry();
  std::string key = op.str();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.ids.find(key);
  if (it != r.ids.end()) return it->second;
  OpId id = static_cast<OpId>(r.ops.size());
  r.ops.push_back(op);
  r.ids.emplace(std::move(key), id);
  return id;
}

const EdgeOp& op_from_id(OpId id) {
  OpRegistry& r = op_registry();
  std::lock_guard<std::mutex> lock(r.mu);
  return r.ops.at(id);  // deque references stay valid
}

StateSpace::StateId StateSpace::intern(const HeadState& state) {
  std::string key = state_key(state);
  auto it = by_key_.find(key);
  if (it != by_key_.end()) return it->second;
  auto id = static_cast<StateId>(states_.size());
  states_.push_back(state);
  complete_.push_back(state.complete());
  by_key_.emplace(std::move(key), id);
  return id;
}

StateSpace::StateId StateSpace::initial(const AmType& supertag_type) {
  auto it = initial_.find(supertag_type.id());
  if (it != initial_.end()) return it->second;
  StateId id = intern(initial_state(supertag_type));
  initial_.emplace(supertag_type.id(), id);
  return id;
}

StateSpace::StateId StateSpace::attach(StateId state, OpId op, const AmType& child) {
  Key key{state, op, child.id()};
  auto it = attach_.find(key);
  if (it != attach_.end()) return it->second;
  auto next = am::attach(states_[state], op_from_id(op), child);
  StateId id = next ? intern(*next) : kDead;
  attach_.emplace(key, id);
  return id;
}

const std::vector<OpId>& StateSpace::candidates(StateId state, const AmType& child) {
  Key key{state, 0, child.id()};
  auto it = candidates_.find(key);
  if (it != candidates_.end()) return it->second;
  std::vector<OpId> ids;
  for (const auto& op : candidate_ops(states_[state], child)) ids.push_back(op_id(op));
  return candidates_.emplace(key, std::move(ids)).first->second;
}

StateSpace& StateSpace::local() {
  thread_local StateSpace space;
  return space;
}

}  // namespace am
