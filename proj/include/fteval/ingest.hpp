#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fteval/core.hpp"

namespace fteval {

enum class LandmarkFormat { kJsonl, kCsv };
enum class FeatureFormat { kFtev, kCsv };

/// Guesses the format from the file extension (.jsonl/.json, .csv).
LandmarkFormat landmark_format_for(const std::filesystem::path& path);
/// Guesses the format from the file extension (.ftev/.bin, .csv).
FeatureFormat feature_format_for(const std::filesystem::path& path);

struct LandmarkFileHeader {
  std::optional<std::string> schema;
  std::size_t landmark_count = 0;
  int width = 0;
  int height = 0;
  double fps = LandmarkSequence::kDefaultFps;
};

/// CSV landmark files carry no geometry; it is supplied out of band.
struct CsvGeometry {
  std::optional<int> width;
  std::optional<int> height;
  double fps = LandmarkSequence::kDefaultFps;
};

struct LandmarkReadOptions {
  CsvGeometry csv;
  /// When set, the file's landmark count (and schema name, if the file names
  /// one) must agree with it.
  std::optional<LandmarkScheme> expected_scheme;
};

struct LandmarkFile {
  LandmarkFileHeader header;
  LandmarkSequence sequence;
};

/// Parses landmark text. `source` is only used for error locations.
LandmarkFile parse_landmarks(std::string_view text, LandmarkFormat format,
                             const std::string& source, const LandmarkReadOptions& options = {});

LandmarkFile read_landmark_file(const std::filesystem::path& path, LandmarkFormat format,
                                const LandmarkReadOptions& options = {});
LandmarkSequence read_landmarks(const std::filesystem::path& path, LandmarkFormat format,
                                const LandmarkReadOptions& options = {});
LandmarkSequence read_landmarks(const std::filesystem::path& path,
                                const LandmarkReadOptions& options = {});

/// Canonical encoding: header line first, frames in order, coordinates with
/// six decimals.
std::string format_landmarks(const LandmarkSequence& seq, LandmarkFormat format,
                             const std::optional<std::string>& schema = std::nullopt);
void write_landmarks(const std::filesystem::path& path, const LandmarkSequence& seq,
                     LandmarkFormat format,
                     const std::optional<std::string>& schema = std::nullopt);

struct FrameDirectory {
  FrameSource frames;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// Loads every *.png in `dir`, ordered lexicographically by filename.
FrameDirectory read_frame_directory(const std::filesystem::path& dir);
FrameSource read_frames(const std::filesystem::path& dir);

/// Writes frame_000000.png, frame_000001.png, ... into `dir` (created if needed).
void write_frames(const std::filesystem::path& dir, const FrameSource& frames);

struct FeatureFileHeader {
  static constexpr char kMagic[4] = {'F', 'T', 'E', 'V'};
  static constexpr std::uint32_t kVersion = 1;
  static constexpr std::size_t kSize = 16;

  std::uint32_t version = kVersion;
  std::uint32_t rows = 0;
  std::uint32_t dim = 0;
};

FeatureSet parse_features(std::string_view bytes, FeatureFormat format,
                          const std::string& source);
FeatureSet read_features(const std::filesystem::path& path, FeatureFormat format);
FeatureSet read_features(const std::filesystem::path& path);

/// FTEV stores float32, so values are narrowed on write.
std::string format_features(const FeatureSet& features, FeatureFormat format);
void write_features(const std::filesystem::path& path, const FeatureSet& features,
                    FeatureFormat format);

/// Whole-file read; throws ParseError(kIo) on failure.
std::string read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::string_view bytes);

}  // namespace fteval
