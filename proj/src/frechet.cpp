#include "fteval/frechet.hpp"

#include <cmath>

#include <json.hpp>

#include "fteval/errors.hpp"
#include "fteval/ingest.hpp"

namespace fteval {

void GaussianStats::validate() const {
  const std::size_t d = mean.size();
  if (d == 0) {
    throw PreconditionError("Gaussian stats: empty mean");
  }
  if (covariance.rows() != d || covariance.cols() != d) {
    throw PreconditionError("Gaussian stats: covariance is " +
                            std::to_string(covariance.rows()) + "x" +
                            std::to_string(covariance.cols()) + ", mean has dimension " +
                            std::to_string(d));
  }
  for (double v : mean) {
    if (!std::isfinite(v)) throw PreconditionError("Gaussian stats: non-finite mean");
  }
  for (double v : covariance.data()) {
    if (!std::isfinite(v)) throw PreconditionError("Gaussian stats: non-finite covariance");
  }
  if (covariance.asymmetry() > 1e-10) {
    throw PreconditionError("Gaussian stats: covariance is not symmetric");
  }
}

GaussianStats estimate_stats(const FeatureSet& features) {
  const std::size_t n = features.rows();
  const std::size_t d = features.dim();
  if (n < 2) {
    throw PreconditionError("covariance estimation needs at least 2 rows");
  }
  GaussianStats stats{std::vector<double>(d, 0.0), Matrix(d, d)};
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = features.row(r);
    for (std::size_t c = 0; c < d; ++c) stats.mean[c] += row[c];
  }
  for (auto& m : stats.mean) m /= static_cast<double>(n);

  std::vector<double> centered(d);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = features.row(r);
    for (std::size_t c = 0; c < d; ++c) centered[c] = row[c] - stats.mean[c];
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) stats.covariance(i, j) += centered[i] * centered[j];
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      stats.covariance(i, j) /= denom;
      stats.covariance(j, i) = stats.covariance(i, j);
    }
  }
  stats.covariance = stats.covariance.symmetrized();
  return stats;
}

double frechet_distance(const GaussianStats& a, const GaussianStats& b,
                        const FrechetOptions& options) {
  a.validate();
  b.validate();
  if (a.dim() != b.dim()) {
    throw PreconditionError("Frechet distance: dimensions differ (" + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()) + ")");
  }
  double mean_term = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double diff = a.mean[i] - b.mean[i];
    mean_term += diff * diff;
  }

  const Matrix root_a =
      sqrt_psd(a.covariance.symmetrized(), options.negative_eigen_tolerance, options.eigen);
  const Matrix inner = (root_a * b.covariance.symmetrized() * root_a).symmetrized();
  const auto eig = jacobi_eigen(inner, options.eigen);
  if (!eig.converged) {
    throw PreconditionError("Frechet distance: eigensolver did not converge");
  }
  double trace_root = 0.0;
  for (double lambda : eig.values) {
    if (lambda < -options.negative_eigen_tolerance) {
      throw PreconditionError("Frechet distance: covariance product has eigenvalue " +
                              std::to_string(lambda) + " (invalid covariance)");
    }
    if (lambda > 0.0) trace_root += std::sqrt(lambda);
  }
  const double distance =
      mean_term + a.covariance.trace() + b.covariance.trace() - 2.0 * trace_root;
  return distance > 0.0 ? distance : 0.0;
}

double fid(const FeatureSet& gen, const FeatureSet& gt, double eps,
           const FrechetOptions& options) {
  if (gen.dim() != gt.dim()) {
    throw PreconditionError("FID: feature dimensions differ (" + std::to_string(gen.dim()) +
                            " vs " + std::to_string(gt.dim()) + ")");
  }
  if (!(std::isfinite(eps) && eps >= 0.0)) {
    throw PreconditionError("FID: eps must be finite and non-negative");
  }
  auto a = estimate_stats(gen);
  auto b = estimate_stats(gt);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    a.covariance(i, i) += eps;
    b.covariance(i, i) += eps;
  }
  return frechet_distance(a, b, options);
}

GaussianStats load_gaussian_stats(const std::filesystem::path& path) {
  const auto text = read_file_bytes(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(ParseErrorKind::kMalformedLine, SourceLocation{path.string(), {}, e.byte},
                     e.what());
  }
  GaussianStats stats;
  std::vector<std::vector<double>> rows;
  try {
    stats.mean = doc.at("mean").get<std::vector<double>>();
    rows = doc.at("cov").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ParseErrorKind::kMissingHeader, SourceLocation{path.string(), {}, {}},
                     std::string("expected {\"mean\": [...], \"cov\": [[...]]}: ") + e.what());
  }
  const std::size_t d = stats.mean.size();
  if (rows.size() != d) {
    throw ParseError(ParseErrorKind::kBadShape, SourceLocation{path.string(), {}, {}},
                     "cov has " + std::to_string(rows.size()) + " rows, mean has " +
                         std::to_string(d) + " entries");
  }
  stats.covariance = Matrix(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) {
      throw ParseError(ParseErrorKind::kBadShape, SourceLocation{path.string(), {}, {}},
                       "cov row " + std::to_string(i) + " has " +
                           std::to_string(rows[i].size()) + " entries");
    }
    for (std::size_t j = 0; j < d; ++j) stats.covariance(i, j) = rows[i][j];
  }
  stats.validate();
  return stats;
}

}  // namespace fteval
