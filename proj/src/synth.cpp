#include "fteval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fteval/errors.hpp"

namespace fteval {

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

PortableRng::PortableRng(std::uint64_t seed) : state_(splitmix64(seed)) {}

std::uint64_t PortableRng::next_u64() {
  state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
  return state_;
}

double PortableRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double PortableRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

// clang-format off
const std::array<Vec2, 68> kFaceTemplate68 = {{
    {0.0800, 0.4000}, {0.0881, 0.4936}, {0.1120, 0.5837}, {0.1508, 0.6667},
    {0.2030, 0.7394}, {0.2667, 0.7991}, {0.3393, 0.8435}, {0.4181, 0.8708},
    {0.5000, 0.8800}, {0.5819, 0.8708}, {0.6607, 0.8435}, {0.7333, 0.7991},
    {0.7970, 0.7394}, {0.8492, 0.6667}, {0.8880, 0.5837}, {0.9119, 0.4936},
    {0.9200, 0.4000}, {0.1800, 0.2600}, {0.2450, 0.2388}, {0.3100, 0.2300},
    {0.3750, 0.2388}, {0.4400, 0.2600}, {0.5600, 0.2600}, {0.6250, 0.2388},
    {0.6900, 0.2300}, {0.7550, 0.2388}, {0.8200, 0.2600}, {0.5000, 0.3400},
    {0.5000, 0.4000}, {0.5000, 0.4600}, {0.5000, 0.5200}, {0.4200, 0.5600},
    {0.4600, 0.5675}, {0.5000, 0.5750}, {0.5400, 0.5675}, {0.5800, 0.5600},
    {0.2500, 0.3600}, {0.2850, 0.3383}, {0.3550, 0.3383}, {0.3900, 0.3600},
    {0.3550, 0.3817}, {0.2850, 0.3817}, {0.6100, 0.3600}, {0.6450, 0.3383},
    {0.7150, 0.3383}, {0.7500, 0.3600}, {0.7150, 0.3817}, {0.6450, 0.3817},
    {0.3400, 0.7200}, {0.3614, 0.6900}, {0.4200, 0.6680}, {0.5000, 0.6600},
    {0.5800, 0.6680}, {0.6386, 0.6900}, {0.6600, 0.7200}, {0.6386, 0.7500},
    {0.5800, 0.7720}, {0.5000, 0.7800}, {0.4200, 0.7720}, {0.3614, 0.7500},
    {0.4000, 0.7200}, {0.4293, 0.7023}, {0.5000, 0.6950}, {0.5707, 0.7023},
    {0.6000, 0.7200}, {0.5707, 0.7377}, {0.5000, 0.7450}, {0.4293, 0.7377},
}};
// clang-format on

namespace {

std::size_t generic_mouth_count(std::size_t n) { return std::max<std::size_t>(2, n / 4); }

/// Envelope value at frame t, linearly resampled over `frames`.
double envelope_at(const std::vector<double>& env, std::size_t t, std::size_t frames) {
  if (env.empty()) return 0.0;
  if (env.size() == 1 || frames == 1) return env.front();
  const double pos = static_cast<double>(t) * static_cast<double>(env.size() - 1) /
                     static_cast<double>(frames - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= env.size()) return env.back();
  const double frac = pos - static_cast<double>(lo);
  return env[lo] + frac * (env[lo + 1] - env[lo]);
}

}  // namespace

std::vector<Vec2> face_template(std::size_t n) {
  if (n == kFaceTemplate68.size()) {
    return {kFaceTemplate68.begin(), kFaceTemplate68.end()};
  }
  const std::size_t mouth = generic_mouth_count(n);
  const std::size_t contour = n - mouth;
  std::vector<Vec2> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < contour; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(contour);
    pts.push_back({0.5 + 0.40 * std::cos(a), 0.45 + 0.45 * std::sin(a)});
  }
  for (std::size_t k = 0; k < mouth; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(mouth);
    pts.push_back({0.5 + 0.12 * std::cos(a), 0.75 + 0.04 * std::sin(a)});
  }
  return pts;
}

std::vector<std::size_t> synth_mouth_indices(std::size_t n) {
  std::vector<std::size_t> idx;
  if (n == kFaceTemplate68.size()) {
    for (std::size_t i = 48; i < 68; ++i) idx.push_back(i);
    return idx;
  }
  const std::size_t mouth = generic_mouth_count(n);
  for (std::size_t i = n - mouth; i < n; ++i) idx.push_back(i);
  return idx;
}

void SynthSpec::validate() const {
  if (frames < 1) throw PreconditionError("synth: at least one frame is required");
  if (landmarks < 4) throw PreconditionError("synth: at least 4 landmarks are required");
  if (width < 1 || height < 1) throw PreconditionError("synth: frame size must be positive");
  if (!(head_drift.amplitude >= 0.0) || !std::isfinite(head_drift.amplitude)) {
    throw PreconditionError("synth: drift amplitude must be finite and non-negative");
  }
  if (!(head_drift.period > 0.0) || !std::isfinite(head_drift.period)) {
    throw PreconditionError("synth: drift period must be positive");
  }
  for (double e : mouth_open) {
    if (!(e >= 0.0 && e <= 1.0)) {
      throw PreconditionError("synth: mouth envelope samples must lie in [0, 1]");
    }
  }
  if (!(jitter_sigma >= 0.0) || !std::isfinite(jitter_sigma)) {
    throw PreconditionError("synth: jitter sigma must be finite and non-negative");
  }
}

LandmarkSequence synth_landmarks(const SynthSpec& spec) {
  spec.validate();
  const auto layout = face_template(spec.landmarks);
  const auto mouth = synth_mouth_indices(spec.landmarks);
  std::vector<bool> is_mouth(spec.landmarks, false);
  double mouth_cy = 0.0;
  for (auto i : mouth) {
    is_mouth[i] = true;
    mouth_cy += layout[i].y;
  }
  mouth_cy /= static_cast<double>(mouth.size());

  const double scale = 0.6 * std::min(spec.width, spec.height);
  const double cx = 0.5 * spec.width;
  const double cy = 0.5 * spec.height;
  PortableRng rng(spec.seed);

  std::vector<FrameLandmarks> frames;
  frames.reserve(spec.frames);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const double open = envelope_at(spec.mouth_open, t, spec.frames);
    const double phase =
        2.0 * std::numbers::pi * static_cast<double>(t) / spec.head_drift.period;
    const double dx = spec.head_drift.amplitude * std::sin(phase);
    const double dy = 0.5 * spec.head_drift.amplitude * (1.0 - std::cos(phase));
    FrameLandmarks f{t, {}};
    f.points.reserve(spec.landmarks);
    for (std::size_t i = 0; i < spec.landmarks; ++i) {
      Vec2 p = layout[i];
      if (is_mouth[i]) {
        p.y = mouth_cy + (p.y - mouth_cy) * (1.0 + 2.0 * open);
      }
      const double jx = rng.normal();
      const double jy = rng.normal();
      f.points.push_back({cx + (p.x - 0.5) * scale + dx + spec.jitter_sigma * jx,
                          cy + (p.y - 0.5) * scale + dy + spec.jitter_sigma * jy});
    }
    frames.push_back(std::move(f));
  }
  return LandmarkSequence(std::move(frames), spec.width, spec.height);
}

LandmarkSequence perturb(const LandmarkSequence& seq, const Perturbation& how) {
  auto frames = seq.frames();
  if (const auto* tr = std::get_if<Translate>(&how)) {
    if (!std::isfinite(tr->offset.x) || !std::isfinite(tr->offset.y)) {
      throw PreconditionError("perturb: translation must be finite");
    }
    for (auto& f : frames) {
      for (auto& p : f.points) p = p + tr->offset;
    }
  } else if (const auto* j = std::get_if<Jitter>(&how)) {
    if (!(j->sigma >= 0.0) || !std::isfinite(j->sigma)) {
      throw PreconditionError("perturb: jitter sigma must be finite and non-negative");
    }
    if (j->sigma > 0.0) {
      PortableRng rng(j->seed);
      for (auto& f : frames) {
        for (auto& p : f.points) {
          p.x += j->sigma * rng.normal();
          p.y += j->sigma * rng.normal();
        }
      }
    }
  } else {
    const long k = std::get<TimeShift>(how).frames;
    const long total = static_cast<long>(frames.size());
    if (k <= -total || k >= total) {
      throw PreconditionError("perturb: time shift " + std::to_string(k) + " leaves no frames of " +
                              std::to_string(total));
    }
    if (k > 0) {
      frames.erase(frames.begin(), frames.begin() + k);
    } else if (k < 0) {
      frames.erase(frames.end() + k, frames.end());
    }
    for (std::size_t t = 0; t < frames.size(); ++t) frames[t].index = t;
  }
  return LandmarkSequence(std::move(frames), seq.width(), seq.height(), seq.fps());
}

FeatureSet synth_features(std::uint64_t seed, std::size_t rows, std::size_t dim,
                          const std::vector<double>& mean, double scale) {
  if (rows < 2) throw PreconditionError("synth features: at least 2 rows are required");
  if (dim < 1) throw PreconditionError("synth features: dimension must be at least 1");
  if (mean.size() != dim) {
    throw PreconditionError("synth features: mean has " + std::to_string(mean.size()) +
                            " entries, dimension is " + std::to_string(dim));
  }
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw PreconditionError("synth features: scale must be finite and non-negative");
  }
  PortableRng rng(seed);
  std::vector<double> values(rows * dim);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < dim; ++c) values[r * dim + c] = mean[c] + scale * rng.normal();
  }
  return FeatureSet(rows, dim, std::move(values));
}

FrameSource synth_frames(std::uint64_t seed, std::size_t count, int width, int height,
                         int channels) {
  if (count < 1 || width < 1 || height < 1) {
    throw PreconditionError("synth frames: count and size must be positive");
  }
  PortableRng rng(seed);
  std::vector<FrameSource::Raster> frames(count);
  const std::size_t samples = static_cast<std::size_t>(width) * height * channels;
  for (auto& f : frames) {
    f.resize(samples);
    for (auto& s : f) s = static_cast<std::uint8_t>(rng.next_u64() >> 56);
  }
  return FrameSource(std::move(frames), width, height, channels);
}

std::pair<EmbeddingStream, EmbeddingStream> synth_embedding_pair(std::uint64_t seed,
                                                                 std::size_t count,
                                                                 std::size_t dim, long shift) {
  if (count < 1 || dim < 1) {
    throw PreconditionError("synth embeddings: count and dimension must be positive");
  }
  const std::size_t lag = static_cast<std::size_t>(std::labs(shift));
  const std::size_t base_len = count + lag;
  PortableRng rng(seed);
  std::vector<double> base(base_len * dim);
  for (std::size_t t = 0; t < base_len; ++t) {
    double sq = 0.0;
    do {
      sq = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        base[t * dim + c] = rng.normal();
        sq += base[t * dim + c] * base[t * dim + c];
      }
    } while (sq == 0.0);
  }
  const std::size_t audio_start = shift >= 0 ? lag : 0;
  const std::size_t visual_start = shift >= 0 ? 0 : lag;
  auto slice = [&](std::size_t start) {
    return std::vector<double>(base.begin() + static_cast<std::ptrdiff_t>(start * dim),
                               base.begin() + static_cast<std::ptrdiff_t>((start + count) * dim));
  };
  return {EmbeddingStream(count, dim, slice(audio_start)),
          EmbeddingStream(count, dim, slice(visual_start))};
}

}  // namespace fteval
