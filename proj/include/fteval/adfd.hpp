#pragma once

#include <span>
#include <vector>

#include "fteval/core.hpp"

namespace fteval {

/// Audio-driven facial dynamics score and the two terms it is built from.
///
/// The spatial term averages, over frames, one minus the mean per-landmark
/// Euclidean error normalised by the frame diagonal (clamped to [0, 1]).
/// The motion term averages, over the T-1 frame transitions, the cosine
/// similarity of the flattened generated and ground-truth displacement
/// fields, mapped from [-1, 1] to [0, 1]. The score is
/// `w1 * spatial * w2 * motion`.
struct AdfdBreakdown {
  double spatial = 0.0;
  double motion = 0.0;
  double score = 0.0;
  std::vector<double> per_frame_spatial;
  std::vector<double> per_transition_motion;
};

/// clamp(1 - mean_i |gen_i - gt_i| / diagonal, 0, 1). Throws when the point
/// counts differ or diagonal <= 0.
double spatial_term(const FrameLandmarks& gen_frame, const FrameLandmarks& gt_frame,
                    double diagonal);

/// (cos(gen, gt) + 1) / 2 over the flattened 2n-vectors of one transition.
/// Both fields zero gives 1.0; exactly one zero gives 0.5.
double motion_term(std::span<const Vec2> gen_motion, std::span<const Vec2> gt_motion);

/// Both sequences must already agree on frame count, landmark count and
/// frame size (see validate_pair). A single-frame pair has motion 1.0.
AdfdBreakdown adfd(const LandmarkSequence& gen, const LandmarkSequence& gt,
                   const AdfdWeights& weights = {});

}  // namespace fteval
