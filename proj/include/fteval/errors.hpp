#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace fteval {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that could not be read or understood. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A metric's preconditions were violated (shape mismatch, invalid parameter, ...).
/// The CLI maps these to exit code 3.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind {
  kIo,
  kMalformedLine,
  kMissingHeader,
  kPointCount,
  kFrameGap,
  kArity,
  kBadMagic,
  kBadVersion,
  kBadShape,
  kTruncated,
  kTrailingBytes,
  kNonFinite,
  kUnreadableImage,
  kDimensionMismatch,
  kEmptyDirectory,
};

const char* to_string(ParseErrorKind kind);

/// Where in a file a parse error was detected. Text formats set `line`
/// (1-based), binary formats set `byte_offset`.
struct SourceLocation {
  std::string path;
  std::optional<std::size_t> line;
  std::optional<std::uint64_t> byte_offset;
};

class ParseError : public InputError {
 public:
  ParseError(ParseErrorKind kind, SourceLocation where, const std::string& detail);

  ParseErrorKind kind() const noexcept { return kind_; }
  const SourceLocation& where() const noexcept { return where_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ParseErrorKind kind_;
  SourceLocation where_;
  std::string detail_;
};

}  // namespace fteval
