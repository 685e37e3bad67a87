#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fteval {

/// A 2-D landmark position or displacement, in pixels.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

double norm(Vec2 v);

struct FrameLandmarks {
  std::size_t index = 0;
  std::vector<Vec2> points;
};

/// Per-frame 2-D landmarks of one video, with the frame geometry they live in.
///
/// Construction validates: at least one frame, every frame carries the same
/// non-zero number of points, frame indices run 0..T-1 in order, all
/// coordinates are finite and the frame dimensions are positive. Points
/// outside [0, width] x [0, height] are accepted and counted.
class LandmarkSequence {
 public:
  static constexpr double kDefaultFps = 25.0;

  LandmarkSequence(std::vector<FrameLandmarks> frames, int width, int height,
                   double fps = kDefaultFps);

  const std::vector<FrameLandmarks>& frames() const noexcept { return frames_; }
  const FrameLandmarks& frame(std::size_t t) const { return frames_.at(t); }
  std::size_t frame_count() const noexcept { return frames_.size(); }
  std::size_t landmark_count() const noexcept { return frames_.front().points.size(); }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double fps() const noexcept { return fps_; }
  std::size_t out_of_frame_points() const noexcept { return out_of_frame_; }

  /// First `count` frames. `count` must be in [1, frame_count()].
  LandmarkSequence truncated(std::size_t count) const;

 private:
  std::vector<FrameLandmarks> frames_;
  int width_;
  int height_;
  double fps_;
  std::size_t out_of_frame_ = 0;
};

/// transitions[t][i] = frame[t+1].points[i] - frame[t].points[i].
struct MotionField {
  std::vector<std::vector<Vec2>> transitions;
};

MotionField derive_motion_field(const LandmarkSequence& seq);

/// Diagonal of a width x height frame: the largest distance between two
/// points inside it.
double frame_diagonal(int width, int height);
double frame_diagonal(const LandmarkSequence& seq);

enum class MismatchPolicy { kStrict, kTruncate };

MismatchPolicy parse_mismatch_policy(const std::string& text);
const char* to_string(MismatchPolicy policy);

struct AlignedPair {
  LandmarkSequence gen;
  LandmarkSequence gt;
  std::vector<std::string> warnings;
};

/// Checks that two sequences are comparable. Landmark count and frame size
/// must match; frame counts must match under kStrict and are cut to the
/// shorter one under kTruncate (with a warning).
AlignedPair validate_pair(const LandmarkSequence& gen, const LandmarkSequence& gt,
                          MismatchPolicy policy = MismatchPolicy::kStrict);

/// 8-bit raster frames, channel-interleaved, row-major.
class FrameSource {
 public:
  using Raster = std::vector<std::uint8_t>;

  FrameSource(std::vector<Raster> frames, int width, int height, int channels);

  const std::vector<Raster>& frames() const noexcept { return frames_; }
  std::size_t frame_count() const noexcept { return frames_.size(); }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t samples_per_frame() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_) *
           static_cast<std::size_t>(channels_);
  }

 private:
  std::vector<Raster> frames_;
  int width_;
  int height_;
  int channels_;
};

/// N x D matrix of embeddings, row-major. N >= 2, D >= 1, all finite.
class FeatureSet {
 public:
  FeatureSet(std::size_t rows, std::size_t dim, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * dim_, dim_);
  }

 private:
  std::size_t rows_;
  std::size_t dim_;
  std::vector<double> values_;
};

struct AdfdWeights {
  double w1 = 1.0;
  double w2 = 1.0;

  void validate() const;
};

struct LandmarkScheme {
  std::string name;
  std::size_t total = 0;
  std::vector<std::size_t> mouth_indices;

  /// Throws PreconditionError unless mouth_indices is non-empty, unique and
  /// inside [0, total).
  void validate() const;

  /// 68-point iBUG layout; mouth is 48..67.
  static LandmarkScheme ibug68();
};

}  // namespace fteval
