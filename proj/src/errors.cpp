#include "fteval/errors.hpp"

namespace fteval {

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kIo: return "io";
    case ParseErrorKind::kMalformedLine: return "malformed-line";
    case ParseErrorKind::kMissingHeader: return "missing-header";
    case ParseErrorKind::kPointCount: return "point-count";
    case ParseErrorKind::kFrameGap: return "frame-gap";
    case ParseErrorKind::kArity: return "arity";
    case ParseErrorKind::kBadMagic: return "bad-magic";
    case ParseErrorKind::kBadVersion: return "bad-version";
    case ParseErrorKind::kBadShape: return "bad-shape";
    case ParseErrorKind::kTruncated: return "truncated";
    case ParseErrorKind::kTrailingBytes: return "trailing-bytes";
    case ParseErrorKind::kNonFinite: return "non-finite";
    case ParseErrorKind::kUnreadableImage: return "unreadable-image";
    case ParseErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ParseErrorKind::kEmptyDirectory: return "empty-directory";
  }
  return "unknown";
}

namespace {

std::string describe(ParseErrorKind kind, const SourceLocation& where, const std::string& detail) {
  std::string out = where.path;
  if (where.line) {
    out += ":" + std::to_string(*where.line);
  }
  if (where.byte_offset) {
    out += "@" + std::to_string(*where.byte_offset);
  }
  out += ": ";
  out += to_string(kind);
  out += ": ";
  out += detail;
  return out;
}

}  // namespace

ParseError::ParseError(ParseErrorKind kind, SourceLocation where, const std::string& detail)
    : InputError(describe(kind, where, detail)),
      kind_(kind),
      where_(std::move(where)),
      detail_(detail) {}

}  // namespace fteval
