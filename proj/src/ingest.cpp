#include "fteval/ingest.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fteval/errors.hpp"

namespace fteval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

[[noreturn]] void fail_line(ParseErrorKind kind, const std::string& source, std::size_t line,
                            const std::string& detail) {
  throw ParseError(kind, SourceLocation{source, line, std::nullopt}, detail);
}

[[noreturn]] void fail_byte(ParseErrorKind kind, const std::string& source,
                            std::uint64_t offset, const std::string& detail) {
  throw ParseError(kind, SourceLocation{source, std::nullopt, offset}, detail);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

/// Splits text into lines, keeping 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> split_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t line_no = 1;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.emplace_back(line_no, text.substr(start, end - start));
    start = end + 1;
    ++line_no;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_double(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    return std::nullopt;
  }
  return value;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct PendingFrame {
  std::size_t line;
  std::vector<Vec2> points;
};

/// Orders parsed frames and rejects duplicates and gaps.
std::vector<FrameLandmarks> assemble_frames(std::map<std::size_t, PendingFrame> pending,
                                            const std::string& source,
                                            std::size_t last_line) {
  if (pending.empty()) {
    fail_line(ParseErrorKind::kBadShape, source, last_line, "file contains no frames");
  }
  std::vector<FrameLandmarks> frames;
  frames.reserve(pending.size());
  std::size_t expected = 0;
  for (auto& [index, frame] : pending) {
    if (index != expected) {
      fail_line(ParseErrorKind::kFrameGap, source, frame.line,
                "missing frame " + std::to_string(expected) + " (next present frame is " +
                    std::to_string(index) + ")");
    }
    frames.push_back(FrameLandmarks{index, std::move(frame.points)});
    ++expected;
  }
  return frames;
}

void check_scheme(const LandmarkFileHeader& header, const LandmarkReadOptions& options,
                  const std::string& source) {
  if (!options.expected_scheme) return;
  const auto& scheme = *options.expected_scheme;
  if (header.landmark_count != scheme.total) {
    fail_line(ParseErrorKind::kPointCount, source, 1,
              "file has " + std::to_string(header.landmark_count) + " landmarks but scheme '" +
                  scheme.name + "' expects " + std::to_string(scheme.total));
  }
  if (header.schema && *header.schema != scheme.name) {
    fail_line(ParseErrorKind::kMissingHeader, source, 1,
              "file declares schema '" + *header.schema + "' but '" + scheme.name +
                  "' was requested");
  }
}

LandmarkFile parse_jsonl(std::string_view text, const std::string& source,
                         const LandmarkReadOptions& options) {
  std::optional<LandmarkFileHeader> header;
  std::map<std::size_t, PendingFrame> pending;
  std::size_t last_line = 1;

  for (auto [line_no, raw] : split_lines(text)) {
    last_line = line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      fail_line(ParseErrorKind::kMalformedLine, source, line_no,
                std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
      fail_line(ParseErrorKind::kMalformedLine, source, line_no, "line is not a JSON object");
    }

    if (!header) {
      if (!doc.contains("header") || !doc["header"].is_object()) {
        fail_line(ParseErrorKind::kMissingHeader, source, line_no,
                  "first line must be a {\"header\": {...}} record");
      }
      const auto& h = doc["header"];
      LandmarkFileHeader parsed;
      for (const char* key : {"n", "width", "height"}) {
        if (!h.contains(key) || !h[key].is_number_integer()) {
          fail_line(ParseErrorKind::kMissingHeader, source, line_no,
                    std::string("header field '") + key + "' missing or not an integer");
        }
      }
      const auto n = h["n"].get<std::int64_t>();
      const auto width = h["width"].get<std::int64_t>();
      const auto height = h["height"].get<std::int64_t>();
      if (n < 1 || width < 1 || height < 1 || width > INT32_MAX || height > INT32_MAX) {
        fail_line(ParseErrorKind::kBadShape, source, line_no,
                  "header n, width and height must be positive");
      }
      parsed.landmark_count = static_cast<std::size_t>(n);
      parsed.width = static_cast<int>(width);
      parsed.height = static_cast<int>(height);
      if (h.contains("fps")) {
        if (!h["fps"].is_number() || !std::isfinite(h["fps"].get<double>()) ||
            h["fps"].get<double>() <= 0.0) {
          fail_line(ParseErrorKind::kMissingHeader, source, line_no,
                    "header field 'fps' must be a positive number");
        }
        parsed.fps = h["fps"].get<double>();
      }
      if (h.contains("schema")) {
        if (!h["schema"].is_string()) {
          fail_line(ParseErrorKind::kMissingHeader, source, line_no,
                    "header field 'schema' must be a string");
        }
        parsed.schema = h["schema"].get<std::string>();
      }
      header = parsed;
      continue;
    }

    if (!doc.contains("frame") || !doc["frame"].is_number_integer() ||
        doc["frame"].get<std::int64_t>() < 0) {
      fail_line(ParseErrorKind::kMalformedLine, source, line_no,
                "record needs a non-negative integer 'frame'");
    }
    if (!doc.contains("points") || !doc["points"].is_array()) {
      fail_line(ParseErrorKind::kMalformedLine, source, line_no, "record needs a 'points' array");
    }
    const auto index = static_cast<std::size_t>(doc["frame"].get<std::int64_t>());
    const auto& pts = doc["points"];
    if (pts.size() != header->landmark_count) {
      fail_line(ParseErrorKind::kPointCount, source, line_no,
                "frame " + std::to_string(index) + " has " + std::to_string(pts.size()) +
                    " points, header declares " + std::to_string(header->landmark_count));
    }
    PendingFrame frame{line_no, {}};
    frame.points.reserve(pts.size());
    for (const auto& p : pts) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        fail_line(ParseErrorKind::kMalformedLine, source, line_no,
                  "each point must be an [x, y] pair of numbers");
      }
      const Vec2 v{p[0].get<double>(), p[1].get<double>()};
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
        fail_line(ParseErrorKind::kNonFinite, source, line_no,
                  "non-finite coordinate in frame " + std::to_string(index));
      }
      frame.points.push_back(v);
    }
    if (!pending.emplace(index, std::move(frame)).second) {
      fail_line(ParseErrorKind::kMalformedLine, source, line_no,
                "duplicate frame " + std::to_string(index));
    }
  }

  if (!header) {
    fail_line(ParseErrorKind::kMissingHeader, source, last_line, "no header record found");
  }
  check_scheme(*header, options, source);
  auto frames = assemble_frames(std::move(pending), source, last_line);
  return LandmarkFile{*header, LandmarkSequence(std::move(frames), header->width,
                                                header->height, header->fps)};
}

LandmarkFile parse_csv_landmarks(std::string_view text, const std::string& source,
                                 const LandmarkReadOptions& options) {
  const auto& geom = options.csv;
  if (!geom.width || !geom.height) {
    throw InputError(source + ": CSV landmark files need the frame width and height "
                              "supplied separately");
  }
  if (*geom.width < 1 || *geom.height < 1 || !(geom.fps > 0.0)) {
    throw PreconditionError(source + ": CSV geometry must be positive");
  }

  std::optional<std::size_t> n;
  std::map<std::size_t, PendingFrame> pending;
  std::size_t last_line = 1;

  for (auto [line_no, raw] : split_lines(text)) {
    last_line = line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto fields = split_fields(line);

    if (!n) {
      if (fields.size() < 3 || fields.size() % 2 == 0 || fields[0] != "frame") {
        fail_line(ParseErrorKind::kMissingHeader, source, line_no,
                  "header row must be frame,x0,y0,...,x{n-1},y{n-1}");
      }
      const std::size_t count = (fields.size() - 1) / 2;
      for (std::size_t i = 0; i < count; ++i) {
        if (fields[1 + 2 * i] != "x" + std::to_string(i) ||
            fields[2 + 2 * i] != "y" + std::to_string(i)) {
          fail_line(ParseErrorKind::kMissingHeader, source, line_no,
                    "header column " + std::to_string(1 + 2 * i) + " should be x" +
                        std::to_string(i) + ",y" + std::to_string(i));
        }
      }
      n = count;
      continue;
    }

    if (fields.size() != 1 + 2 * *n) {
      fail_line(ParseErrorKind::kArity, source, line_no,
                "expected " + std::to_string(1 + 2 * *n) + " fields, got " +
                    std::to_string(fields.size()));
    }
    std::size_t index = 0;
    {
      const auto f = fields[0];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), index);
      if (ec != std::errc() || ptr != f.data() + f.size() || f.empty()) {
        fail_line(ParseErrorKind::kMalformedLine, source, line_no,
                  "frame index '" + std::string(f) + "' is not a non-negative integer");
      }
    }
    PendingFrame frame{line_no, {}};
    frame.points.reserve(*n);
    for (std::size_t i = 0; i < *n; ++i) {
      const auto x = parse_double(fields[1 + 2 * i]);
      const auto y = parse_double(fields[2 + 2 * i]);
      if (!x || !y) {
        fail_line(ParseErrorKind::kMalformedLine, source, line_no,
                  "landmark " + std::to_string(i) + " has a non-numeric coordinate");
      }
      if (!std::isfinite(*x) || !std::isfinite(*y)) {
        fail_line(ParseErrorKind::kNonFinite, source, line_no,
                  "non-finite coordinate for landmark " + std::to_string(i));
      }
      frame.points.push_back({*x, *y});
    }
    if (!pending.emplace(index, std::move(frame)).second) {
      fail_line(ParseErrorKind::kMalformedLine, source, line_no,
                "duplicate frame " + std::to_string(index));
    }
  }

  if (!n) {
    fail_line(ParseErrorKind::kMissingHeader, source, last_line, "no header row found");
  }
  LandmarkFileHeader header{std::nullopt, *n, *geom.width, *geom.height, geom.fps};
  check_scheme(header, options, source);
  auto frames = assemble_frames(std::move(pending), source, last_line);
  return LandmarkFile{header, LandmarkSequence(std::move(frames), header.width, header.height,
                                               header.fps)};
}

std::uint32_t load_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32_le(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xFFu));
  }
}

FeatureSet parse_ftev(std::string_view bytes, const std::string& source) {
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 4 || std::memcmp(data, FeatureFileHeader::kMagic, 4) != 0) {
    fail_byte(ParseErrorKind::kBadMagic, source, 0, "file does not start with \"FTEV\"");
  }
  if (bytes.size() < FeatureFileHeader::kSize) {
    fail_byte(ParseErrorKind::kTruncated, source, bytes.size(),
              "header needs 16 bytes, file has " + std::to_string(bytes.size()));
  }
  FeatureFileHeader header;
  header.version = load_u32_le(data + 4);
  header.rows = load_u32_le(data + 8);
  header.dim = load_u32_le(data + 12);
  if (header.version != FeatureFileHeader::kVersion) {
    fail_byte(ParseErrorKind::kBadVersion, source, 4,
              "unsupported version " + std::to_string(header.version));
  }
  if (header.rows < 2) {
    fail_byte(ParseErrorKind::kBadShape, source, 8,
              "rows must be at least 2, got " + std::to_string(header.rows));
  }
  if (header.dim < 1) {
    fail_byte(ParseErrorKind::kBadShape, source, 12, "dim must be at least 1");
  }
  const std::uint64_t count = static_cast<std::uint64_t>(header.rows) * header.dim;
  const std::uint64_t expected = FeatureFileHeader::kSize + count * 4;
  if (bytes.size() < expected) {
    fail_byte(ParseErrorKind::kTruncated, source, bytes.size(),
              "payload needs " + std::to_string(count * 4) + " bytes, file has " +
                  std::to_string(bytes.size() - FeatureFileHeader::kSize));
  }
  if (bytes.size() > expected) {
    fail_byte(ParseErrorKind::kTrailingBytes, source, expected,
              std::to_string(bytes.size() - expected) + " unexpected bytes after payload");
  }
  std::vector<double> values(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    const std::uint64_t offset = FeatureFileHeader::kSize + 4 * k;
    const float f = std::bit_cast<float>(load_u32_le(data + offset));
    if (!std::isfinite(f)) {
      fail_byte(ParseErrorKind::kNonFinite, source, offset,
                "non-finite value in row " + std::to_string(k / header.dim));
    }
    values[k] = static_cast<double>(f);
  }
  return FeatureSet(header.rows, header.dim, std::move(values));
}

FeatureSet parse_feature_csv(std::string_view text, const std::string& source) {
  std::size_t dim = 0;
  std::size_t rows = 0;
  std::vector<double> values;
  std::size_t last_line = 1;
  for (auto [line_no, raw] : split_lines(text)) {
    last_line = line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_fields(line);
    if (rows == 0) {
      dim = fields.size();
    } else if (fields.size() != dim) {
      fail_line(ParseErrorKind::kArity, source, line_no,
                "row " + std::to_string(rows) + " has " + std::to_string(fields.size()) +
                    " values, expected " + std::to_string(dim));
    }
    for (auto f : fields) {
      const auto v = parse_double(f);
      if (!v) {
        fail_line(ParseErrorKind::kMalformedLine, source, line_no,
                  "'" + std::string(f) + "' is not a number");
      }
      if (!std::isfinite(*v)) {
        fail_line(ParseErrorKind::kNonFinite, source, line_no,
                  "non-finite value in row " + std::to_string(rows));
      }
      values.push_back(*v);
    }
    ++rows;
  }
  if (rows < 2) {
    fail_line(ParseErrorKind::kBadShape, source, last_line,
              "at least 2 rows are required, got " + std::to_string(rows));
  }
  return FeatureSet(rows, dim, std::move(values));
}

struct PngImage {
  png_image image{};
  PngImage() {
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

struct DecodedPng {
  int width;
  int height;
  int channels;
  std::vector<std::uint8_t> pixels;
};

DecodedPng decode_png(const fs::path& file) {
  PngImage png;
  if (!png_image_begin_read_from_file(&png.image, file.c_str())) {
    throw ParseError(ParseErrorKind::kUnreadableImage, SourceLocation{file.string(), {}, 0},
                     png.image.message);
  }
  const bool color = (png.image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  DecodedPng out{static_cast<int>(png.image.width), static_cast<int>(png.image.height),
                 color ? 3 : 1, {}};
  out.pixels.resize(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, out.pixels.data(), 0, nullptr)) {
    throw ParseError(ParseErrorKind::kUnreadableImage, SourceLocation{file.string(), {}, 0},
                     png.image.message);
  }
  return out;
}

/// Digit run at the end of the stem, used to spot filenames that sort
/// lexicographically in a different order than numerically.
std::size_t trailing_digit_count(const fs::path& p) {
  const std::string stem = p.stem().string();
  std::size_t count = 0;
  for (auto it = stem.rbegin(); it != stem.rend() && std::isdigit(static_cast<unsigned char>(*it));
       ++it) {
    ++count;
  }
  return count;
}

}  // namespace

LandmarkFormat landmark_format_for(const fs::path& path) {
  const auto ext = lower_extension(path);
  if (ext == ".jsonl" || ext == ".json") return LandmarkFormat::kJsonl;
  if (ext == ".csv") return LandmarkFormat::kCsv;
  throw InputError(path.string() + ": cannot infer landmark format from extension '" + ext +
                   "' (expected .jsonl or .csv)");
}

FeatureFormat feature_format_for(const fs::path& path) {
  const auto ext = lower_extension(path);
  if (ext == ".ftev" || ext == ".bin") return FeatureFormat::kFtev;
  if (ext == ".csv") return FeatureFormat::kCsv;
  throw InputError(path.string() + ": cannot infer feature format from extension '" + ext +
                   "' (expected .ftev or .csv)");
}

std::string read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(ParseErrorKind::kIo, SourceLocation{path.string(), {}, {}},
                     "cannot open file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw ParseError(ParseErrorKind::kIo, SourceLocation{path.string(), {}, {}},
                     "read failed");
  }
  return std::move(buf).str();
}

void write_file_bytes(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw InputError(path.string() + ": write failed");
  }
}

LandmarkFile parse_landmarks(std::string_view text, LandmarkFormat format,
                             const std::string& source, const LandmarkReadOptions& options) {
  return format == LandmarkFormat::kJsonl ? parse_jsonl(text, source, options)
                                          : parse_csv_landmarks(text, source, options);
}

LandmarkFile read_landmark_file(const fs::path& path, LandmarkFormat format,
                                const LandmarkReadOptions& options) {
  return parse_landmarks(read_file_bytes(path), format, path.string(), options);
}

LandmarkSequence read_landmarks(const fs::path& path, LandmarkFormat format,
                                const LandmarkReadOptions& options) {
  return read_landmark_file(path, format, options).sequence;
}

LandmarkSequence read_landmarks(const fs::path& path, const LandmarkReadOptions& options) {
  return read_landmarks(path, landmark_format_for(path), options);
}

std::string format_landmarks(const LandmarkSequence& seq, LandmarkFormat format,
                             const std::optional<std::string>& schema) {
  std::string out;
  if (format == LandmarkFormat::kJsonl) {
    out += "{\"header\": {";
    if (schema) {
      out += "\"schema\": " + json(*schema).dump() + ", ";
    }
    out += "\"n\": " + std::to_string(seq.landmark_count()) +
           ", \"width\": " + std::to_string(seq.width()) +
           ", \"height\": " + std::to_string(seq.height()) + ", \"fps\": " + fixed6(seq.fps()) +
           "}}\n";
    for (const auto& f : seq.frames()) {
      out += "{\"frame\": " + std::to_string(f.index) + ", \"points\": [";
      for (std::size_t i = 0; i < f.points.size(); ++i) {
        if (i) out += ", ";
        out += "[" + fixed6(f.points[i].x) + ", " + fixed6(f.points[i].y) + "]";
      }
      out += "]}\n";
    }
    return out;
  }
  out += "frame";
  for (std::size_t i = 0; i < seq.landmark_count(); ++i) {
    out += ",x" + std::to_string(i) + ",y" + std::to_string(i);
  }
  out += "\n";
  for (const auto& f : seq.frames()) {
    out += std::to_string(f.index);
    for (const auto& p : f.points) {
      out += "," + fixed6(p.x) + "," + fixed6(p.y);
    }
    out += "\n";
  }
  return out;
}

void write_landmarks(const fs::path& path, const LandmarkSequence& seq, LandmarkFormat format,
                     const std::optional<std::string>& schema) {
  write_file_bytes(path, format_landmarks(seq, format, schema));
}

FrameDirectory read_frame_directory(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw ParseError(ParseErrorKind::kIo, SourceLocation{dir.string(), {}, {}},
                     "not a readable directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && lower_extension(entry.path()) == ".png") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) {
    throw ParseError(ParseErrorKind::kEmptyDirectory, SourceLocation{dir.string(), {}, {}},
                     "no .png frames found");
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });

  std::vector<std::string> warnings;
  {
    const auto digits = trailing_digit_count(files.front());
    const bool uneven = std::any_of(files.begin(), files.end(), [&](const fs::path& p) {
      return trailing_digit_count(p) != digits;
    });
    if (digits == 0 || uneven) {
      warnings.push_back(dir.string() +
                         ": frame filenames are not uniformly zero-padded; "
                         "lexicographic order may differ from numeric order");
    }
  }

  std::vector<FrameSource::Raster> rasters;
  rasters.reserve(files.size());
  int width = 0;
  int height = 0;
  int channels = 0;
  for (std::size_t k = 0; k < files.size(); ++k) {
    auto decoded = decode_png(files[k]);
    if (k == 0) {
      width = decoded.width;
      height = decoded.height;
      channels = decoded.channels;
    } else if (decoded.width != width || decoded.height != height ||
               decoded.channels != channels) {
      throw ParseError(ParseErrorKind::kDimensionMismatch,
                       SourceLocation{files[k].string(), {}, {}},
                       std::to_string(decoded.width) + "x" + std::to_string(decoded.height) +
                           "x" + std::to_string(decoded.channels) + " differs from first frame " +
                           std::to_string(width) + "x" + std::to_string(height) + "x" +
                           std::to_string(channels));
    }
    rasters.push_back(std::move(decoded.pixels));
  }
  return FrameDirectory{FrameSource(std::move(rasters), width, height, channels),
                        std::move(files), std::move(warnings)};
}

FrameSource read_frames(const fs::path& dir) { return read_frame_directory(dir).frames; }

void write_frames(const fs::path& dir, const FrameSource& frames) {
  fs::create_directories(dir);
  for (std::size_t t = 0; t < frames.frame_count(); ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06zu.png", t);
    const fs::path file = dir / name;
    PngImage png;
    png.image.width = static_cast<png_uint_32>(frames.width());
    png.image.height = static_cast<png_uint_32>(frames.height());
    png.image.format = frames.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&png.image, file.c_str(), 0, frames.frames()[t].data(), 0,
                                 nullptr)) {
      throw InputError(file.string() + ": PNG write failed: " + png.image.message);
    }
  }
}

FeatureSet parse_features(std::string_view bytes, FeatureFormat format,
                          const std::string& source) {
  return format == FeatureFormat::kFtev ? parse_ftev(bytes, source)
                                        : parse_feature_csv(bytes, source);
}

FeatureSet read_features(const fs::path& path, FeatureFormat format) {
  return parse_features(read_file_bytes(path), format, path.string());
}

FeatureSet read_features(const fs::path& path) {
  return read_features(path, feature_format_for(path));
}

std::string format_features(const FeatureSet& features, FeatureFormat format) {
  std::string out;
  if (format == FeatureFormat::kFtev) {
    if (features.rows() > UINT32_MAX || features.dim() > UINT32_MAX) {
      throw PreconditionError("feature set too large for the FTEV format");
    }
    out.reserve(FeatureFileHeader::kSize + features.values().size() * 4);
    out.append(FeatureFileHeader::kMagic, 4);
    store_u32_le(out, FeatureFileHeader::kVersion);
    store_u32_le(out, static_cast<std::uint32_t>(features.rows()));
    store_u32_le(out, static_cast<std::uint32_t>(features.dim()));
    for (double v : features.values()) {
      store_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
    return out;
  }
  char buf[40];
  for (std::size_t r = 0; r < features.rows(); ++r) {
    const auto row = features.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      if (c) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_features(const fs::path& path, const FeatureSet& features, FeatureFormat format) {
  write_file_bytes(path, format_features(features, format));
}

}  // namespace fteval
