#include "fteval/sync.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "fteval/errors.hpp"

namespace fteval {

namespace {

std::vector<double> normalized_rows(const EmbeddingStream& s) {
  std::vector<double> out(s.size() * s.dim());
  for (std::size_t t = 0; t < s.size(); ++t) {
    const auto v = s.vector(t);
    double sq = 0.0;
    for (double x : v) sq += x * x;
    const double len = std::sqrt(sq);
    for (std::size_t c = 0; c < s.dim(); ++c) out[t * s.dim() + c] = v[c] / len;
  }
  return out;
}

}  // namespace

EmbeddingStream::EmbeddingStream(std::size_t count, std::size_t dim, std::vector<double> values,
                                 int hop)
    : count_(count), dim_(dim), values_(std::move(values)), hop_(hop) {
  if (count_ < 1 || dim_ < 1) {
    throw PreconditionError("embedding stream: needs at least one vector of dimension >= 1");
  }
  if (hop_ < 1) {
    throw PreconditionError("embedding stream: hop must be at least 1");
  }
  if (values_.size() != count_ * dim_) {
    throw PreconditionError("embedding stream: value count does not match shape");
  }
  for (std::size_t t = 0; t < count_; ++t) {
    double sq = 0.0;
    for (double x : vector(t)) {
      if (!std::isfinite(x)) {
        throw PreconditionError("embedding stream: non-finite value in vector " +
                                std::to_string(t));
      }
      sq += x * x;
    }
    if (sq == 0.0) {
      throw PreconditionError("embedding stream: vector " + std::to_string(t) +
                              " has zero norm");
    }
  }
}

EmbeddingStream::EmbeddingStream(const FeatureSet& features, int hop)
    : EmbeddingStream(features.rows(), features.dim(), features.values(), hop) {}

SyncResult sync_score(const EmbeddingStream& audio, const EmbeddingStream& visual,
                      int max_offset) {
  if (audio.dim() != visual.dim()) {
    throw PreconditionError("sync: embedding dimensions differ (" + std::to_string(audio.dim()) +
                            " vs " + std::to_string(visual.dim()) + ")");
  }
  if (audio.hop() != visual.hop()) {
    throw PreconditionError("sync: streams use different hops");
  }
  if (max_offset < 0) {
    throw PreconditionError("sync: max offset must be non-negative");
  }
  const int hop = audio.hop();
  const long steps = max_offset / hop;
  const long na = static_cast<long>(audio.size());
  const long nv = static_cast<long>(visual.size());
  const std::size_t dim = audio.dim();
  const auto a = normalized_rows(audio);
  const auto v = normalized_rows(visual);

  SyncResult out;
  for (long k = -steps; k <= steps; ++k) {
    const long begin = std::max(0L, -k);
    const long end = std::min(na, nv - k);
    const long overlap = end - begin;
    if (overlap < static_cast<long>(kMinSyncOverlap)) {
      throw PreconditionError("sync: offset " + std::to_string(k * hop) + " leaves " +
                              std::to_string(std::max(0L, overlap)) +
                              " overlapping vectors, need at least " +
                              std::to_string(kMinSyncOverlap));
    }
    double total = 0.0;
    for (long t = begin; t < end; ++t) {
      const double* x = a.data() + static_cast<std::size_t>(t) * dim;
      const double* y = v.data() + static_cast<std::size_t>(t + k) * dim;
      double sq = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double d = x[c] - y[c];
        sq += d * d;
      }
      total += std::sqrt(sq);
    }
    out.distance_curve.push_back(
        SyncPoint{static_cast<int>(k * hop), total / static_cast<double>(overlap)});
  }

  const auto better = [](const SyncPoint& p, const SyncPoint& q) {
    if (p.distance != q.distance) return p.distance < q.distance;
    if (std::abs(p.offset) != std::abs(q.offset)) return std::abs(p.offset) < std::abs(q.offset);
    return p.offset < q.offset;
  };
  const auto best = *std::min_element(out.distance_curve.begin(), out.distance_curve.end(), better);
  out.best_offset = best.offset;
  out.lse_d = best.distance;

  std::vector<double> sorted;
  sorted.reserve(out.distance_curve.size());
  for (const auto& p : out.distance_curve) sorted.push_back(p.distance);
  std::sort(sorted.begin(), sorted.end());
  // The curve always has an odd number of points.
  const double median = sorted[sorted.size() / 2];
  out.lse_c = median - out.lse_d;
  return out;
}

}  // namespace fteval
