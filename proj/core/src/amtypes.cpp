#include "am/amtypes.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "am/error.hpp"

namespace am {

namespace detail {

struct TypeNode {
  bool bottom = false;
  std::vector<AmType::Entry> entries;
  std::string text;
  std::uint32_t id = 0;
  // Every name occurring at any depth, sorted.
  std::vector<std::string> names;
};

}  // namespace detail

namespace {

struct Registry {
  std::mutex mu;
  std::unordered_map<std::string, std::unique_ptr<detail::TypeNode>> by_text;
  std::uint32_t next_id = 0;
};

Registry& registry() {
  static Registry r;
  return r;
}

std::string render_entries(const std::vector<AmType::Entry>& entries) {
  std::string out = "(";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ", ";
    out += entries[i].first;
    if (!entries[i].second.is_empty()) out += entries[i].second.str();
  }
  out += ")";
  return out;
}

bool sorted_contains(const std::vector<std::string>& v, std::string_view x) {
  auto it = std::lower_bound(v.begin(), v.end(), x,
                             [](const std::string& a, std::string_view b) { return a < b; });
  return it != v.end() && *it == x;
}

class TypeParser {
 public:
  explicit TypeParser(std::string_view text) : text_(text) {}

  AmType parse() {
    skip_ws();
    AmType t;
    if (text_.substr(pos_, 3) == "_|_") {
      pos_ += 3;
      t = AmType::bottom();
    } else {
      t = parse_map();
    }
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("trailing characters in type", pos_);
    return t;
  }

 private:
  AmType parse_map() {
    expect('(');
    std::vector<AmType::Entry> entries;
    skip_ws();
    if (peek() == ')') {
      ++pos_;
      return AmType();
    }
    for (;;) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::islower(static_cast<unsigned char>(text_[pos_])) ||
              std::isdigit(static_cast<unsigned char>(text_[pos_]))))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (!is_valid_source_name(name)) throw ParseError("expected source name", start);
      for (const auto& e : entries)
        if (e.first == name) throw ParseError("duplicate source '" + name + "'", start);
      skip_ws();
      AmType ann;
      if (peek() == '(') ann = parse_map();
      entries.emplace_back(std::move(name), ann);
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(')');
      break;
    }
    return AmType::from_entries(std::move(entries));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

bool is_valid_source_name(std::string_view name) noexcept {
  if (name.empty() || name == "root") return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
  });
}

AmType AmType::intern(bool bottom, std::vector<Entry> sorted_entries) {
  std::string text = bottom ? "_|_" : render_entries(sorted_entries);
  Registry& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.by_text.find(text);
  if (it != r.by_text.end()) return AmType(it->second.get());
  auto node = std::make_unique<detail::TypeNode>();
  node->bottom = bottom;
  for (const auto& [name, ann] : sorted_entries) {
    node->names.push_back(name);
    node->names.insert(node->names.end(), ann.node_->names.begin(), ann.node_->names.end());
  }
  std::sort(node->names.begin(), node->names.end());
  node->names.erase(std::unique(node->names.begin(), node->names.end()), node->names.end());
  node->entries = std::move(sorted_entries);
  node->text = text;
  node->id = r.next_id++;
  const detail::TypeNode* raw = node.get();
  r.by_text.emplace(std::move(text), std::move(node));
  return AmType(raw);
}

AmType::AmType() {
  static const detail::TypeNode* empty_node = intern(false, {}).node_;
  node_ = empty_node;
}

AmType AmType::bottom() {
  static const AmType b = intern(true, {});
  return b;
}

AmType AmType::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!is_valid_source_name(entries[i].first))
      throw TypeError("invalid source name '" + entries[i].first + "'");
    if (i && entries[i].first == entries[i - 1].first)
      throw TypeError("duplicate source '" + entries[i].first + "'");
    if (entries[i].second.is_bottom())
      throw TypeError("annotation of '" + entries[i].first + "' is bottom");
  }
  return intern(false, std::move(entries));
}

bool AmType::is_bottom() const noexcept { return node_->bottom; }
bool AmType::is_empty() const noexcept { return !node_->bottom && node_->entries.empty(); }
std::size_t AmType::size() const noexcept { return node_->entries.size(); }
const std::vector<AmType::Entry>& AmType::entries() const noexcept { return node_->entries; }
const std::string& AmType::str() const noexcept { return node_->text; }
std::uint32_t AmType::id() const noexcept { return node_->id; }

bool AmType::contains(std::string_view source) const noexcept {
  for (const auto& e : node_->entries)
    if (e.first == source) return true;
  return false;
}

std::optional<AmType> AmType::annotation(std::string_view source) const {
  for (const auto& e : node_->entries)
    if (e.first == source) return e.second;
  return std::nullopt;
}

bool AmType::mentions(std::string_view source) const {
  return sorted_contains(node_->names, source);
}

std::vector<std::string> AmType::all_names() const { return node_->names; }

AmType AmType::without(std::string_view source) const {
  if (is_bottom() || !contains(source)) return *this;
  std::vector<Entry> rest;
  rest.reserve(size() - 1);
  for (const auto& e : node_->entries)
    if (e.first != source) rest.push_back(e);
  return intern(false, std::move(rest));
}

std::strong_ordering operator<=>(const AmType& a, const AmType& b) noexcept {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  return a.str().compare(b.str()) < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

AmType parse_type(std::string_view text) { return TypeParser(text).parse(); }

std::string render_type(const AmType& type) { return type.str(); }

std::size_t open_source_count(const AmType& type) {
  if (type.is_bottom()) throw TypeError("bottom has no sources");
  return type.size();
}

std::optional<AmType> apply_type(const AmType& head, std::string_view a,
                                 const AmType& argument) {
  if (head.is_bottom() || argument.is_bottom()) return std::nullopt;
  auto ann = head.annotation(a);
  if (!ann || *ann != argument) return std::nullopt;
  std::vector<AmType::Entry> merged;
  merged.reserve(head.size() + argument.size());
  for (const auto& e : head.entries()) {
    if (e.first == a) continue;
    // A source whose request mentions `a` must be filled while `a` is open.
    if (e.second.mentions(a)) return std::nullopt;
    merged.push_back(e);
  }
  for (const auto& e : argument.entries()) {
    bool shared = false;
    for (const auto& m : merged) {
      if (m.first == e.first) {
        if (m.second != e.second) return std::nullopt;
        shared = true;
        break;
      }
    }
    if (!shared) merged.push_back(e);
  }
  return AmType::from_entries(std::move(merged));
}

std::optional<AmType> modify_type(const AmType& head, std::string_view a,
                                  const AmType& modifier) {
  if (head.is_bottom() || modifier.is_bottom()) return std::nullopt;
  auto ann = modifier.annotation(a);
  if (!ann || !ann->is_empty()) return std::nullopt;
  for (const auto& e : modifier.entries()) {
    if (e.first == a) continue;
    auto h = head.annotation(e.first);
    if (!h || *h != e.second) return std::nullopt;
  }
  return head;
}

EdgeOp EdgeOp::apply(std::string source) {
  return EdgeOp{Kind::kApply, std::move(source)};
}

EdgeOp EdgeOp::modify(std::string source) {
  return EdgeOp{Kind::kModify, std::move(source)};
}

EdgeOp EdgeOp::parse(std::string_view text) {
  if (text == "IGNORE") return ignore();
  if (text.size() > 4 && text[3] == '_') {
    std::string_view prefix = text.substr(0, 3);
    std::string name(text.substr(4));
    if (is_valid_source_name(name)) {
      if (prefix == "APP") return apply(std::move(name));
      if (prefix == "MOD") return modify(std::move(name));
    }
  }
  throw ParseError("unknown edge label '" + std::string(text) + "'", 0);
}

std::string EdgeOp::str() const {
  switch (kind) {
    case Kind::kApply: return "APP_" + source;
    case Kind::kModify: return "MOD_" + source;
    case Kind::kIgnore: break;
  }
  return "IGNORE";
}

std::optional<AmType> op_result(const EdgeOp& op, const AmType& head,
                                const AmType& dependent) {
  switch (op.kind) {
    case EdgeOp::Kind::kApply: return apply_type(head, op.source, dependent);
    case EdgeOp::Kind::kModify: return modify_type(head, op.source, dependent);
    case EdgeOp::Kind::kIgnore: break;
  }
  if (dependent.is_bottom()) return head;
  return std::nullopt;
}

}  // namespace am
