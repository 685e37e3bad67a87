#include "fteval/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fteval/errors.hpp"

namespace fteval {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw PreconditionError("matrix: expected " + std::to_string(rows_ * cols_) +
                            " values, got " + std::to_string(data_.size()));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

double Matrix::trace() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) sum += (*this)(i, i);
  return sum;
}

double Matrix::frobenius_norm() const {
  double sum = 0.0;
  for (double v : data_) sum += v * v;
  return std::sqrt(sum);
}

double Matrix::asymmetry() const {
  if (!square()) {
    throw PreconditionError("matrix: asymmetry of a non-square matrix");
  }
  double worst = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = r + 1; c < cols_; ++c) {
      worst = std::max(worst, std::abs((*this)(r, c) - (*this)(c, r)));
    }
  }
  return worst;
}

Matrix Matrix::symmetrized() const {
  if (!square()) {
    throw PreconditionError("matrix: cannot symmetrize a non-square matrix");
  }
  Matrix s(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    s(r, r) = (*this)(r, r);
    for (std::size_t c = r + 1; c < cols_; ++c) {
      const double v = 0.5 * ((*this)(r, c) + (*this)(c, r));
      s(r, c) = v;
      s(c, r) = v;
    }
  }
  return s;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) {
    throw PreconditionError("matrix product: inner dimensions differ");
  }
  Matrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw PreconditionError("matrix sum: shapes differ");
  }
  Matrix out(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + (-1.0) * b; }

Matrix operator*(double s, const Matrix& a) {
  Matrix out = a;
  for (auto& v : out.data_) v *= s;
  return out;
}

SymmetricEigen jacobi_eigen(const Matrix& input, const JacobiOptions& options) {
  if (!input.square()) {
    throw PreconditionError("eigensolver: matrix must be square");
  }
  const std::size_t n = input.rows();
  Matrix a = input.symmetrized();
  Matrix v = Matrix::identity(n);

  auto off_norm = [&] {
    double sum = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) sum += 2.0 * a(p, q) * a(p, q);
    }
    return std::sqrt(sum);
  };

  const double threshold = options.tolerance * a.frobenius_norm();
  SymmetricEigen out;
  out.converged = off_norm() <= threshold;
  while (!out.converged && out.sweeps < options.max_sweeps) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that zeroes a(p, q).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    ++out.sweeps;
    out.converged = off_norm() <= threshold;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

Matrix sqrt_psd(const Matrix& a, double negative_tolerance, const JacobiOptions& options) {
  const auto eig = jacobi_eigen(a, options);
  if (!eig.converged) {
    throw PreconditionError("matrix square root: eigensolver did not converge in " +
                            std::to_string(options.max_sweeps) + " sweeps");
  }
  const std::size_t n = a.rows();
  std::vector<double> roots(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = eig.values[k];
    if (lambda < -negative_tolerance) {
      throw PreconditionError("matrix square root: eigenvalue " + std::to_string(lambda) +
                              " is negative (matrix is not positive semi-definite)");
    }
    roots[k] = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        sum += eig.vectors(i, k) * roots[k] * eig.vectors(j, k);
      }
      out(i, j) = sum;
      out(j, i) = sum;
    }
  }
  return out;
}

}  // namespace fteval
