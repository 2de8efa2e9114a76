#pragma once

// Types of the Apply-Modify graph algebra and the type-level arithmetic of
// its operations.
//
// A type is either bottom (the value of tokens without semantic content) or
// a finite map from source names to annotation types. Types are interned on
// construction, so equality and hashing are pointer operations.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace am {

/// Legal source names are nonempty strings over [a-z0-9]; "root" is reserved.
bool is_valid_source_name(std::string_view name) noexcept;

namespace detail {
struct TypeNode;
}

class AmType {
 public:
  using Entry = std::pair<std::string, AmType>;

  /// The empty type ().
  AmType();

  static AmType bottom();
  static AmType empty() { return AmType(); }

  /// Builds a type from (source, annotation) entries in any order.
  /// Throws TypeError on duplicate or malformed source names and on bottom
  /// annotations.
  static AmType from_entries(std::vector<Entry> entries);

  bool is_bottom() const noexcept;
  bool is_empty() const noexcept;

  /// Number of top-level sources; zero for bottom.
  std::size_t size() const noexcept;
  const std::vector<Entry>& entries() const noexcept;

  bool contains(std::string_view source) const noexcept;
  std::optional<AmType> annotation(std::string_view source) const;

  /// True if `source` names an entry anywhere inside this type, at any depth.
  bool mentions(std::string_view source) const;

  /// All source names at any depth, sorted and unique.
  std::vector<std::string> all_names() const;

  AmType without(std::string_view source) const;

  /// Canonical rendering: "()", "_|_", "(o(s), s)".
  const std::string& str() const noexcept;

  /// Dense interning id; stable for the lifetime of the process.
  std::uint32_t id() const noexcept;

  friend bool operator==(const AmType& a, const AmType& b) noexcept {
    return a.node_ == b.node_;
  }
  /// Ordered by canonical rendering, so iteration order is reproducible.
  friend std::strong_ordering operator<=>(const AmType& a, const AmType& b) noexcept;

 private:
  explicit AmType(const detail::TypeNode* node) : node_(node) {}
  static AmType intern(bool bottom, std::vector<Entry> sorted_entries);

  const detail::TypeNode* node_;
};

AmType parse_type(std::string_view text);
std::string render_type(const AmType& type);

/// Number of top-level sources of a non-bottom type. Throws TypeError on
/// bottom, which has no sources to count.
std::size_t open_source_count(const AmType& type);

/// Type of APP_a(G1, G2) given the types of G1 and G2, or nullopt where the
/// operation is undefined.
///
/// Defined iff neither operand is bottom, `a` is a source of `head`, the
/// annotation of `a` equals `argument`, no other source of `head` mentions
/// `a` inside its annotation (such a source has to be filled first), and the
/// sources shared by head-minus-a and `argument` agree on annotations.
/// The result is (head minus a) merged with `argument`.
std::optional<AmType> apply_type(const AmType& head, std::string_view a,
                                 const AmType& argument);

/// Type of MOD_a(G1, G2): `head` unchanged when `modifier` has source `a`
/// with an empty annotation and every other modifier source appears in
/// `head` with the same annotation.
std::optional<AmType> modify_type(const AmType& head, std::string_view a,
                                  const AmType& modifier);

/// Label of a dependency edge: APP_a, MOD_a or IGNORE.
struct EdgeOp {
  enum class Kind : std::uint8_t { kApply, kModify, kIgnore };

  Kind kind = Kind::kIgnore;
  std::string source;

  static EdgeOp apply(std::string source);
  static EdgeOp modify(std::string source);
  static EdgeOp ignore() { return EdgeOp{}; }

  /// Parses "APP_s", "MOD_m", "IGNORE". Throws ParseError otherwise.
  static EdgeOp parse(std::string_view text);
  std::string str() const;

  bool is_apply() const noexcept { return kind == Kind::kApply; }
  bool is_modify() const noexcept { return kind == Kind::kModify; }
  bool is_ignore() const noexcept { return kind == Kind::kIgnore; }

  friend auto operator<=>(const EdgeOp&, const EdgeOp&) = default;
};

/// Dispatches to apply_type / modify_type. IGNORE(t1, t2) is t1 when t2 is
/// bottom and undefined otherwise; APP and MOD are undefined on bottom
/// operands and never produce bottom.
std::optional<AmType> op_result(const EdgeOp& op, const AmType& head,
                                const AmType& dependent);

}  // namespace am

template <>
struct std::hash<am::AmType> {
  std::size_t operator()(const am::AmType& t) const noexcept { return t.id(); }
};

template <>
struct std::hash<am::EdgeOp> {
  std::size_t operator()(const am::EdgeOp& op) const noexcept {
    return std::hash<std::string>{}(op.source) * 31 + static_cast<std::size_t>(op.kind);
  }
};
