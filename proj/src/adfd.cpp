#include "fteval/adfd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fteval/errors.hpp"

namespace fteval {

double spatial_term(const FrameLandmarks& gen_frame, const FrameLandmarks& gt_frame,
                    double diagonal) {
  if (!(diagonal > 0.0)) {
    throw PreconditionError("spatial term: normalising distance must be positive");
  }
  const auto& a = gen_frame.points;
  const auto& b = gt_frame.points;
  if (a.size() != b.size() || a.empty()) {
    throw PreconditionError("spatial term: frames have " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()) + " landmarks");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += norm(a[i] - b[i]);
  }
  const double mean = total / static_cast<double>(a.size());
  return std::clamp(1.0 - mean / diagonal, 0.0, 1.0);
}

double motion_term(std::span<const Vec2> gen_motion, std::span<const Vec2> gt_motion) {
  if (gen_motion.size() != gt_motion.size()) {
    throw PreconditionError("motion term: displacement lists have " +
                            std::to_string(gen_motion.size()) + " and " +
                            std::to_string(gt_motion.size()) + " entries");
  }
  double dot = 0.0;
  double gen_sq = 0.0;
  double gt_sq = 0.0;
  for (std::size_t i = 0; i < gen_motion.size(); ++i) {
    const Vec2 g = gen_motion[i];
    const Vec2 r = gt_motion[i];
    if (!std::isfinite(g.x) || !std::isfinite(g.y) || !std::isfinite(r.x) ||
        !std::isfinite(r.y)) {
      throw PreconditionError("motion term: non-finite displacement");
    }
    dot += g.x * r.x + g.y * r.y;
    gen_sq += g.x * g.x + g.y * g.y;
    gt_sq += r.x * r.x + r.y * r.y;
  }
  const bool gen_still = gen_sq == 0.0;
  const bool gt_still = gt_sq == 0.0;
  if (gen_still && gt_still) return 1.0;
  if (gen_still || gt_still) return 0.5;
  // sqrt of the product keeps cos(v, v) exactly 1.
  const double product = gen_sq * gt_sq;
  const double denom = (product > 0.0 && std::isfinite(product))
                           ? std::sqrt(product)
                           : std::sqrt(gen_sq) * std::sqrt(gt_sq);
  const double cosine = std::clamp(dot / denom, -1.0, 1.0);
  return (cosine + 1.0) / 2.0;
}

AdfdBreakdown adfd(const LandmarkSequence& gen, const LandmarkSequence& gt,
                   const AdfdWeights& weights) {
  weights.validate();
  if (gen.frame_count() != gt.frame_count() || gen.landmark_count() != gt.landmark_count() ||
      gen.width() != gt.width() || gen.height() != gt.height()) {
    throw PreconditionError("ADFD: sequences are not aligned (validate the pair first)");
  }
  const double diagonal = frame_diagonal(gt);
  const std::size_t frames = gt.frame_count();

  AdfdBreakdown out;
  out.per_frame_spatial.reserve(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    out.per_frame_spatial.push_back(spatial_term(gen.frame(t), gt.frame(t), diagonal));
  }
  out.spatial = std::accumulate(out.per_frame_spatial.begin(), out.per_frame_spatial.end(), 0.0) /
                static_cast<double>(frames);

  const auto gen_motion = derive_motion_field(gen);
  const auto gt_motion = derive_motion_field(gt);
  out.per_transition_motion.reserve(gt_motion.transitions.size());
  for (std::size_t t = 0; t < gt_motion.transitions.size(); ++t) {
    out.per_transition_motion.push_back(
        motion_term(gen_motion.transitions[t], gt_motion.transitions[t]));
  }
  if (out.per_transition_motion.empty()) {
    out.motion = 1.0;
  } else {
    out.motion = std::accumulate(out.per_transition_motion.begin(),
                                 out.per_transition_motion.end(), 0.0) /
                 static_cast<double>(out.per_transition_motion.size());
  }

  out.score = (weights.w1 * weights.w2) * (out.spatial * out.motion);
  return out;
}

}  // namespace fteval
