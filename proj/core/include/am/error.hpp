#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace am {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (PENMAN, type syntax, JSON tables). `position` is a
/// byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at offset " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Line-oriented file formats (treebank, corpus, digraph files).
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

/// An as-graph violating a structural invariant.
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Failure of the graph-level apply / modify operations.
class OperationError : public Error {
 public:
  enum class Kind {
    kMissingSource,
    kAnnotationMismatch,
    kRequestedSource,
    kExtraModifierSource,
    kModifierAnnotation,
    kLabelConflict,
  };

  OperationError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Dependency trees whose shape breaks a structural rule (cycles, several
/// roots, IGNORE into a non-bottom token, ...). Type failures are reported
/// as an absent decoration instead.
class StructureError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

/// Raised when a decoder exceeds its time or item budget; callers retry with
/// a smaller supertag beam.
class DecodeTimeout : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

}  // namespace am
