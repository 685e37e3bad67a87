#pragma once

#include <span>
#include <vector>

#include "fteval/core.hpp"

namespace fteval {

/// T x D embeddings, one every `hop` video frames. No vector may be zero.
class EmbeddingStream {
 public:
  EmbeddingStream(std::size_t count, std::size_t dim, std::vector<double> values, int hop = 1);
  explicit EmbeddingStream(const FeatureSet& features, int hop = 1);

  std::size_t size() const noexcept { return count_; }
  std::size_t dim() const noexcept { return dim_; }
  int hop() const noexcept { return hop_; }
  std::span<const double> vector(std::size_t t) const {
    return std::span<const double>(values_).subspan(t * dim_, dim_);
  }

 private:
  std::size_t count_;
  std::size_t dim_;
  std::vector<double> values_;
  int hop_;
};

struct SyncPoint {
  /// Offset in frames: visual is compared at t + offset against audio at t.
  int offset = 0;
  double distance = 0.0;
};

struct SyncResult {
  /// Positive when the visual stream lags the audio.
  int best_offset = 0;
  /// Minimum of the distance curve.
  double lse_d = 0.0;
  /// Median of the distance curve minus its minimum.
  double lse_c = 0.0;
  std::vector<SyncPoint> distance_curve;
};

constexpr int kDefaultMaxOffset = 15;
constexpr std::size_t kMinSyncOverlap = 5;

/// For every offset k in [-max_offset, max_offset] (stepped in whole hops),
/// the mean Euclidean distance between L2-normalised pairs
/// (audio[t], visual[t + k]) over their overlap. Ties on the minimum go to
/// the smallest |k|, then the negative one.
SyncResult sync_score(const EmbeddingStream& audio, const EmbeddingStream& visual,
                      int max_offset = kDefaultMaxOffset);

}  // namespace fteval
