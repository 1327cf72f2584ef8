#include "tracenorm/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "tracenorm/error.hpp"

namespace tracenorm {

namespace {

void require_finite(const Matrix& m) {
  if (!m.allFinite()) throw NumericalError("matrix has non-finite entries");
}

}  // namespace

ThinSvd thin_svd(const Matrix& m) {
  require_finite(m);
  if (m.size() == 0) return {Matrix(m.rows(), 0), Vector(0), Matrix(m.cols(), 0)};
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD failed to converge");
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Vector singular_values(const Matrix& m) {
  require_finite(m);
  if (m.size() == 0) return Vector(0);
  Eigen::BDCSVD<Matrix> svd(m);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD failed to converge");
  return svd.singularValues();
}

double spectral_norm(const Matrix& m) {
  const Vector s = singular_values(m);
  return s.size() ? s(0) : 0.0;
}

double trace_norm(const Matrix& m) { return singular_values(m).sum(); }

Matrix sv_clip(const Matrix& m, double level) {
  if (level < 0.0) throw ConfigError("clip level must be non-negative");
  ThinSvd svd = thin_svd(m);
  if (svd.s.size() == 0 || svd.s(0) <= level) return m;
  const Vector excess = (svd.s.array() - level).max(0.0).matrix();
  return m - svd.u * excess.asDiagonal() * svd.v.transpose();
}

Matrix sv_soft_threshold(const Matrix& m, double tau) {
  if (tau < 0.0) throw ConfigError("threshold must be non-negative");
  ThinSvd svd = thin_svd(m);
  const Vector shrunk = (svd.s.array() - tau).max(0.0).matrix();
  Eigen::Index keep = 0;
  while (keep < shrunk.size() && shrunk(keep) > 0.0) ++keep;
  return svd.u.leftCols(keep) * shrunk.head(keep).asDiagonal() * svd.v.leftCols(keep).transpose();
}

SpdFactorization::SpdFactorization(const Matrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("SPD factorization needs a square matrix");
  require_finite(a);
  llt_.compute(a);
  if (llt_.info() != Eigen::Success) throw NumericalError("matrix is not positive definite");
}

Matrix SpdFactorization::solve(const Matrix& b) const {
  if (b.rows() != llt_.rows()) throw ShapeError("right-hand side has wrong row count");
  return llt_.solve(b);
}

Vector SpdFactorization::solve(const Vector& b) const {
  if (b.size() != llt_.rows()) throw ShapeError("right-hand side has wrong length");
  return llt_.solve(b);
}

SymmetricSpectrum::SymmetricSpectrum(const Matrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("eigendecomposition needs a square matrix");
  if (!a.allFinite()) throw NumericalError("eigendecomposition of a non-finite matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) throw NumericalError("symmetric eigendecomposition failed");
  q_ = eig.eigenvectors();
  d_ = eig.eigenvalues().cwiseMax(0.0);
}

Vector SymmetricSpectrum::solve_shifted(const Vector& b, double scale, double shift) const {
  if (b.size() != d_.size()) throw ShapeError("right-hand side length does not match the spectrum");
  const Vector denom = (scale * d_).array() + shift;
  const double top = d_.size() ? std::abs(scale) * d_.maxCoeff() + std::abs(shift) : 1.0;
  if (d_.size() && !(denom.minCoeff() > 1e-13 * top)) throw NumericalError("shifted system is singular");
  Vector coef = q_.transpose() * b;
  coef.array() /= denom.array();
  return q_ * coef;
}

CgResult cg_solve(const LinearOperator& apply, const Vector& b, double tol, std::size_t max_iter,
                  const Vector* initial) {
  CgResult result;
  const double b_norm = b.norm();
  result.x = initial ? *initial : Vector::Zero(b.size());
  if (b_norm == 0.0) {
    result.x.setZero();
    result.converged = true;
    return result;
  }
  Vector r = b - apply(result.x);
  Vector p = r;
  double rr = r.squaredNorm();
  result.relative_residual = std::sqrt(rr) / b_norm;
  if (result.relative_residual <= tol) {
    result.converged = true;
    return result;
  }
  for (std::size_t it = 0; it < max_iter; ++it) {
    const Vector ap = apply(p);
    const double curvature = p.dot(ap);
    if (!(curvature > 0.0))
      throw NumericalError("conjugate gradients hit non-positive curvature; operator is not PD");
    const double step = rr / curvature;
    result.x += step * p;
    r -= step * ap;
    const double rr_next = r.squaredNorm();
    result.iterations = it + 1;
    result.relative_residual = std::sqrt(rr_next) / b_norm;
    if (!std::isfinite(result.relative_residual))
      throw NumericalError("conjugate gradients diverged");
    if (result.relative_residual <= tol) {
      result.converged = true;
      return result;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return result;
}

}  // namespace tracenorm
