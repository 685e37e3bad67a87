#include "fteval/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fteval/errors.hpp"

namespace fteval {

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

LandmarkSequence::LandmarkSequence(std::vector<FrameLandmarks> frames, int width, int height,
                                   double fps)
    : frames_(std::move(frames)), width_(width), height_(height), fps_(fps) {
  if (width_ <= 0 || height_ <= 0) {
    throw PreconditionError("landmark sequence: frame dimensions must be positive, got " +
                            std::to_string(width_) + "x" + std::to_string(height_));
  }
  if (!(std::isfinite(fps_) && fps_ > 0.0)) {
    throw PreconditionError("landmark sequence: fps must be a positive finite number");
  }
  if (frames_.empty()) {
    throw PreconditionError("landmark sequence: at least one frame is required");
  }
  const std::size_t n = frames_.front().points.size();
  if (n == 0) {
    throw PreconditionError("landmark sequence: frames must carry at least one landmark");
  }
  for (std::size_t t = 0; t < frames_.size(); ++t) {
    const auto& f = frames_[t];
    if (f.index != t) {
      throw PreconditionError("landmark sequence: frame at position " + std::to_string(t) +
                              " has index " + std::to_string(f.index));
    }
    if (f.points.size() != n) {
      throw PreconditionError("landmark sequence: frame " + std::to_string(t) + " has " +
                              std::to_string(f.points.size()) + " landmarks, expected " +
                              std::to_string(n));
    }
    for (const auto& p : f.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw PreconditionError("landmark sequence: non-finite coordinate in frame " +
                                std::to_string(t));
      }
      if (p.x < 0.0 || p.y < 0.0 || p.x > width_ || p.y > height_) {
        ++out_of_frame_;
      }
    }
  }
}

LandmarkSequence LandmarkSequence::truncated(std::size_t count) const {
  if (count == 0 || count > frames_.size()) {
    throw PreconditionError("landmark sequence: cannot truncate " +
                            std::to_string(frames_.size()) + " frames to " +
                            std::to_string(count));
  }
  std::vector<FrameLandmarks> head(frames_.begin(),
                                   frames_.begin() + static_cast<std::ptrdiff_t>(count));
  return LandmarkSequence(std::move(head), width_, height_, fps_);
}

MotionField derive_motion_field(const LandmarkSequence& seq) {
  MotionField field;
  const auto& frames = seq.frames();
  field.transitions.reserve(frames.size() - 1);
  for (std::size_t t = 0; t + 1 < frames.size(); ++t) {
    const auto& cur = frames[t].points;
    const auto& next = frames[t + 1].points;
    std::vector<Vec2> step(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) {
      step[i] = next[i] - cur[i];
    }
    field.transitions.push_back(std::move(step));
  }
  return field;
}

double frame_diagonal(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw PreconditionError("frame diagonal: dimensions must be positive, got " +
                            std::to_string(width) + "x" + std::to_string(height));
  }
  const double w = width;
  const double h = height;
  return std::sqrt(w * w + h * h);
}

double frame_diagonal(const LandmarkSequence& seq) {
  return frame_diagonal(seq.width(), seq.height());
}

MismatchPolicy parse_mismatch_policy(const std::string& text) {
  if (text == "strict") return MismatchPolicy::kStrict;
  if (text == "truncate") return MismatchPolicy::kTruncate;
  throw PreconditionError("unknown mismatch policy '" + text + "' (expected strict|truncate)");
}

const char* to_string(MismatchPolicy policy) {
  return policy == MismatchPolicy::kStrict ? "strict" : "truncate";
}

AlignedPair validate_pair(const LandmarkSequence& gen, const LandmarkSequence& gt,
                          MismatchPolicy policy) {
  if (gen.landmark_count() != gt.landmark_count()) {
    throw PreconditionError("landmark count mismatch: generated has " +
                            std::to_string(gen.landmark_count()) + ", ground truth has " +
                            std::to_string(gt.landmark_count()));
  }
  if (gen.width() != gt.width() || gen.height() != gt.height()) {
    throw PreconditionError("frame size mismatch: generated " + std::to_string(gen.width()) +
                            "x" + std::to_string(gen.height()) + ", ground truth " +
                            std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
  }
  AlignedPair out{gen, gt, {}};
  if (gen.frame_count() == gt.frame_count()) {
    return out;
  }
  if (policy == MismatchPolicy::kStrict) {
    throw PreconditionError("frame count mismatch: generated has " +
                            std::to_string(gen.frame_count()) + ", ground truth has " +
                            std::to_string(gt.frame_count()) +
                            " (use the truncate policy to compare the common prefix)");
  }
  const std::size_t common = std::min(gen.frame_count(), gt.frame_count());
  out.warnings.push_back("truncated to " + std::to_string(common) + " frames (generated " +
                         std::to_string(gen.frame_count()) + ", ground truth " +
                         std::to_string(gt.frame_count()) + ")");
  out.gen = gen.truncated(common);
  out.gt = gt.truncated(common);
  return out;
}

FrameSource::FrameSource(std::vector<Raster> frames, int width, int height, int channels)
    : frames_(std::move(frames)), width_(width), height_(height), channels_(channels) {
  if (width_ <= 0 || height_ <= 0) {
    throw PreconditionError("frame source: dimensions must be positive");
  }
  if (channels_ != 1 && channels_ != 3) {
    throw PreconditionError("frame source: channels must be 1 or 3, got " +
                            std::to_string(channels_));
  }
  if (frames_.empty()) {
    throw PreconditionError("frame source: at least one frame is required");
  }
  for (std::size_t t = 0; t < frames_.size(); ++t) {
    if (frames_[t].size() != samples_per_frame()) {
      throw PreconditionError("frame source: frame " + std::to_string(t) + " has " +
                              std::to_string(frames_[t].size()) + " samples, expected " +
                              std::to_string(samples_per_frame()));
    }
  }
}

FeatureSet::FeatureSet(std::size_t rows, std::size_t dim, std::vector<double> values)
    : rows_(rows), dim_(dim), values_(std::move(values)) {
  if (rows_ < 2) {
    throw PreconditionError("feature set: at least 2 rows are required, got " +
                            std::to_string(rows_));
  }
  if (dim_ < 1) {
    throw PreconditionError("feature set: dimension must be at least 1");
  }
  if (values_.size() != rows_ * dim_) {
    throw PreconditionError("feature set: expected " + std::to_string(rows_ * dim_) +
                            " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw PreconditionError("feature set: non-finite value in row " +
                              std::to_string(k / dim_));
    }
  }
}

void AdfdWeights::validate() const {
  if (!(std::isfinite(w1) && w1 >= 0.0) || !(std::isfinite(w2) && w2 >= 0.0)) {
    throw PreconditionError("ADFD weights must be finite and non-negative");
  }
}

void LandmarkScheme::validate() const {
  if (total == 0) {
    throw PreconditionError("scheme '" + name + "': total landmark count must be positive");
  }
  if (mouth_indices.empty()) {
    throw PreconditionError("scheme '" + name + "': mouth index set is empty");
  }
  std::set<std::size_t> seen;
  for (auto idx : mouth_indices) {
    if (idx >= total) {
      throw PreconditionError("scheme '" + name + "': mouth index " + std::to_string(idx) +
                              " outside [0, " + std::to_string(total) + ")");
    }
    if (!seen.insert(idx).second) {
      throw PreconditionError("scheme '" + name + "': duplicate mouth index " +
                              std::to_string(idx));
    }
  }
}

LandmarkScheme LandmarkScheme::ibug68() {
  LandmarkScheme s{"ibug68", 68, {}};
  for (std::size_t i = 48; i < 68; ++i) {
    s.mouth_indices.push_back(i);
  }
  return s;
}

}  // namespace fteval
