#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "tracenorm/tensor.hpp"

namespace tracenorm {

/// Thin SVD: m = u * diag(s) * v^T with s sorted descending.
struct ThinSvd {
  Matrix u;
  Vector s;
  Matrix v;
};

ThinSvd thin_svd(const Matrix& m);
Vector singular_values(const Matrix& m);

double spectral_norm(const Matrix& m);
double trace_norm(const Matrix& m);

/// U min(S, level) V^T: projection onto the spectral-norm ball of radius level.
Matrix sv_clip(const Matrix& m, double level);

/// U max(S - tau, 0) V^T: proximal map of tau * ||.||_tr.
Matrix sv_soft_threshold(const Matrix& m, double tau);

/// Cholesky factorization of a symmetric positive-definite matrix, reusable
/// across right-hand sides. Immutable after construction.
class SpdFactorization {
 public:
  /// Throws NumericalError if the matrix is not positive definite.
  explicit SpdFactorization(const Matrix& a);

  Matrix solve(const Matrix& b) const;
  Vector solve(const Vector& b) const;
  Eigen::Index dim() const noexcept { return llt_.rows(); }

 private:
  Eigen::LLT<Matrix> llt_;
};

/// Eigendecomposition A = Q diag(d) Q^T of a symmetric positive semi-definite
/// matrix. Solves (scale A + shift I) x = b for any scale >= 0 and shift
/// without refactoring, so one decomposition serves a whole family of shifts.
class SymmetricSpectrum {
 public:
  SymmetricSpectrum() = default;
  /// Tiny negative eigenvalues from rounding are clamped to zero.
  explicit SymmetricSpectrum(const Matrix& a);

  /// Throws NumericalError if scale A + shift I is numerically singular.
  Vector solve_shifted(const Vector& b, double scale, double shift) const;

  const Matrix& vectors() const noexcept { return q_; }
  const Vector& values() const noexcept { return d_; }
  Eigen::Index dim() const noexcept { return d_.size(); }

 private:
  Matrix q_;
  Vector d_;
};

using LinearOperator = std::function<Vector(const Vector&)>;

struct CgResult {
  Vector x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Conjugate gradients for a symmetric positive-definite operator. Stops at
/// ||A x - b|| <= tol * ||b|| or after max_iter iterations (converged=false).
/// Throws NumericalError if a non-positive curvature direction is hit.
CgResult cg_solve(const LinearOperator& apply, const Vector& b, double tol, std::size_t max_iter,
                  const Vector* initial = nullptr);

}  // namespace tracenorm
