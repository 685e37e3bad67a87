#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "fteval/core.hpp"
#include "fteval/sync.hpp"

namespace fteval {

/// Portable generator behind every synthetic fixture.
///
/// Seeding: state = splitmix64(seed), where splitmix64 adds
/// 0x9E3779B97F4A7C15 and mixes with (z ^ z>>30) * 0xBF58476D1CE4E5B9,
/// (z ^ z>>27) * 0x94D049BB133111EB, z ^ z>>31.
/// Step: state = state * 6364136223846793005 + 1442695040888963407 (mod 2^64),
/// output is the new state.
/// uniform() = (output >> 11) * 2^-53, in [0, 1).
/// normal() is Box-Muller: u1 = 1 - uniform(), u2 = uniform(),
/// r = sqrt(-2 ln u1), returns r cos(2 pi u2) and then r sin(2 pi u2) from
/// the cached pair.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();
  double normal();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Normalised (0..1) 68-point face layout, iBUG ordering.
extern const std::array<Vec2, 68> kFaceTemplate68;

/// Landmark layout used by synth_landmarks for `n` points, in normalised
/// coordinates. n == 68 gives kFaceTemplate68; otherwise n - m points on a
/// face ellipse followed by m = max(2, n / 4) points on a mouth ellipse.
std::vector<Vec2> face_template(std::size_t n);
/// Indices of the mouth points in face_template(n).
std::vector<std::size_t> synth_mouth_indices(std::size_t n);

struct HeadDrift {
  double amplitude = 0.0;  // pixels
  double period = 50.0;    // frames
};

struct SynthSpec {
  std::uint64_t seed = 0;
  std::size_t frames = 1;
  std::size_t landmarks = 68;
  int width = 256;
  int height = 256;
  HeadDrift head_drift;
  /// Mouth opening in [0, 1], resampled linearly over the frames. Empty
  /// means closed throughout.
  std::vector<double> mouth_open;
  double jitter_sigma = 0.0;

  void validate() const;
};

/// Template scaled into the frame (0.6 * min(width, height), centred), mouth
/// points stretched vertically by (1 + 2 * envelope(t)) about the mouth
/// centre, head drift dx = A sin(2 pi t / P), dy = A (1 - cos(2 pi t / P)) / 2,
/// then N(0, sigma^2) added to x and y of each point in frame/point order.
/// Noise is drawn even when sigma is 0.
LandmarkSequence synth_landmarks(const SynthSpec& spec);

struct Translate {
  Vec2 offset;
};
struct Jitter {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};
/// Positive shift drops the first k frames, negative drops the last |k|.
/// Frames are re-indexed from 0.
struct TimeShift {
  long frames = 0;
};
using Perturbation = std::variant<Translate, Jitter, TimeShift>;

LandmarkSequence perturb(const LandmarkSequence& seq, const Perturbation& how);

/// rows = mean + scale * N(0, I), drawn row by row.
FeatureSet synth_features(std::uint64_t seed, std::size_t rows, std::size_t dim,
                          const std::vector<double>& mean, double scale);

/// Uniform noise frames.
FrameSource synth_frames(std::uint64_t seed, std::size_t count, int width, int height,
                         int channels);

/// Gaussian audio stream and a visual stream with visual[t] = audio[t - shift].
std::pair<EmbeddingStream, EmbeddingStream> synth_embedding_pair(std::uint64_t seed,
                                                                 std::size_t count,
                                                                 std::size_t dim, long shift);

}  // namespace fteval
