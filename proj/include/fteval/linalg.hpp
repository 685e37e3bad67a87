#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fteval {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

  Matrix transposed() const;
  double trace() const;
  double frobenius_norm() const;
  /// Largest |a_ij - a_ji|.
  double asymmetry() const;
  /// (A + A^T) / 2.
  Matrix symmetrized() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct JacobiOptions {
  /// Stop once the off-diagonal Frobenius norm is below tolerance * ||A||_F.
  double tolerance = 1e-12;
  int max_sweeps = 100;
};

/// Eigenvalues in ascending order; vectors(:, k) belongs to values[k].
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
  int sweeps = 0;
  bool converged = false;
};

/// Cyclic Jacobi eigensolver for symmetric matrices. Only the symmetric
/// part of `a` is used.
SymmetricEigen jacobi_eigen(const Matrix& a, const JacobiOptions& options = {});

/// Eigenvalues in [-negative_tolerance, 0) are treated as zero; anything
/// more negative throws PreconditionError.
Matrix sqrt_psd(const Matrix& a, double negative_tolerance = 1e-8,
                const JacobiOptions& options = {});

}  // namespace fteval
