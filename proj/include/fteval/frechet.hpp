#pragma once

#include <filesystem>
#include <vector>

#include "fteval/core.hpp"
#include "fteval/linalg.hpp"

namespace fteval {

/// Mean and covariance of a Gaussian fit. Covariance is symmetric to 1e-10.
struct GaussianStats {
  std::vector<double> mean;
  Matrix covariance;

  std::size_t dim() const noexcept { return mean.size(); }
  void validate() const;
};

/// Sample mean and unbiased (N-1) covariance, symmetrised.
GaussianStats estimate_stats(const FeatureSet& features);

struct FrechetOptions {
  /// Eigenvalues in [-tolerance, 0) are clipped to 0; below that is an error.
  double negative_eigen_tolerance = 1e-8;
  JacobiOptions eigen;
};

/// |mu_a - mu_b|^2 + Tr(S_a + S_b - 2 (S_a S_b)^(1/2)), where the trace of
/// the root is taken through the symmetric matrix S_a^(1/2) S_b S_a^(1/2).
/// Clamped at 0.
double frechet_distance(const GaussianStats& a, const GaussianStats& b,
                        const FrechetOptions& options = {});

constexpr double kDefaultFidEps = 1e-6;

/// Frechet distance between the Gaussian fits of two feature sets, with
/// eps * I added to both covariances.
double fid(const FeatureSet& gen, const FeatureSet& gt, double eps = kDefaultFidEps,
           const FrechetOptions& options = {});

/// Reads {"mean": [...], "cov": [[...], ...]}.
GaussianStats load_gaussian_stats(const std::filesystem::path& path);

}  // namespace fteval
