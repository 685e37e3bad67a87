#pragma once

// Test-only helpers and independent oracles. Nothing here calls into the
// implementation paths it is used to check.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "fteval/core.hpp"

namespace fteval::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("fteval_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Builds a sequence from a [frame][landmark] coordinate table.
inline LandmarkSequence make_sequence(const std::vector<std::vector<Vec2>>& table, int width,
                                      int height) {
  std::vector<FrameLandmarks> frames;
  for (std::size_t t = 0; t < table.size(); ++t) frames.push_back({t, table[t]});
  return LandmarkSequence(std::move(frames), width, height);
}

inline std::vector<std::vector<Vec2>> random_table(std::mt19937_64& rng, std::size_t frames,
                                                   std::size_t points, double extent) {
  std::uniform_real_distribution<double> coord(0.0, extent);
  std::vector<std::vector<Vec2>> table(frames, std::vector<Vec2>(points));
  for (auto& f : table) {
    for (auto& p : f) p = {coord(rng), coord(rng)};
  }
  return table;
}

/// Straight-line ADFD: mean over frames of clamp(1 - mean_i dist / diag),
/// times mean over transitions of (cos + 1) / 2 on flattened motion vectors.
struct OracleAdfd {
  double spatial;
  double motion;
  double score;
};

inline OracleAdfd oracle_adfd(const std::vector<std::vector<Vec2>>& gen,
                              const std::vector<std::vector<Vec2>>& gt, double width,
                              double height, double w1 = 1.0, double w2 = 1.0) {
  const std::size_t T = gt.size();
  const std::size_t n = gt[0].size();
  const double diag = std::sqrt(width * width + height * height);
  double spatial_sum = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = gen[t][i].x - gt[t][i].x;
      const double dy = gen[t][i].y - gt[t][i].y;
      d += std::sqrt(dx * dx + dy * dy);
    }
    double s = 1.0 - (d / n) / diag;
    s = s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s);
    spatial_sum += s;
  }
  const double spatial = spatial_sum / T;
  double motion = 1.0;
  if (T > 1) {
    double motion_sum = 0.0;
    for (std::size_t t = 0; t + 1 < T; ++t) {
      std::vector<double> a, b;
      for (std::size_t i = 0; i < n; ++i) {
        a.push_back(gen[t + 1][i].x - gen[t][i].x);
        a.push_back(gen[t + 1][i].y - gen[t][i].y);
        b.push_back(gt[t + 1][i].x - gt[t][i].x);
        b.push_back(gt[t + 1][i].y - gt[t][i].y);
      }
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
      }
      double m;
      if (na == 0.0 && nb == 0.0) {
        m = 1.0;
      } else if (na == 0.0 || nb == 0.0) {
        m = 0.5;
      } else {
        m = (dot / (std::sqrt(na) * std::sqrt(nb)) + 1.0) / 2.0;
      }
      motion_sum += m;
    }
    motion = motion_sum / (T - 1);
  }
  return {spatial, motion, w1 * spatial * w2 * motion};
}

/// Direct 2-D windowed SSIM (no separable filtering) on luma planes.
inline double oracle_ssim(const std::vector<double>& a, const std::vector<double>& b, int width,
                          int height) {
  double g[11];
  double gsum = 0.0;
  for (int i = 0; i < 11; ++i) {
    g[i] = std::exp(-((i - 5) * (i - 5)) / (2.0 * 1.5 * 1.5));
    gsum += g[i];
  }
  const double c1 = 6.5025;
  const double c2 = 58.5225;
  double total = 0.0;
  int count = 0;
  for (int y = 0; y + 11 <= height; ++y) {
    for (int x = 0; x + 11 <= width; ++x) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int j = 0; j < 11; ++j) {
        for (int i = 0; i < 11; ++i) {
          const double w = g[i] * g[j] / (gsum * gsum);
          const double va = a[(y + j) * width + x + i];
          const double vb = b[(y + j) * width + x + i];
          ma += w * va;
          mb += w * vb;
          saa += w * va * va;
          sbb += w * vb * vb;
          sab += w * va * vb;
        }
      }
      const double var_a = saa - ma * ma;
      const double var_b = sbb - mb * mb;
      const double cov = sab - ma * mb;
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) /
               ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
      ++count;
    }
  }
  return total / count;
}

}  // namespace fteval::testing
