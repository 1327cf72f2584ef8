#pragma once

#include <cstddef>
#include <mutex>

#include "tracenorm/dataset.hpp"
#include "tracenorm/linalg.hpp"
#include "tracenorm/tensor.hpp"

namespace tracenorm {

/// Vectorized view of a Dataset shared by all fits on it: the m x N design
/// matrix (row i is vec(X_i)), targets, and the Gram matrix X X^T.
///
/// The eigendecompositions the solvers need do not depend on lambda or the
/// ADMM penalty, so they are computed once on first use and shared by every
/// fit on the design (thread-safe).
class Design {
 public:
  explicit Design(const Dataset& data);

  Design(const Design&) = delete;
  Design& operator=(const Design&) = delete;

  const Matrix& x() const noexcept { return x_; }
  const Vector& y() const noexcept { return y_; }
  const Matrix& gram() const noexcept { return gram_; }
  const Shape& shape() const noexcept { return shape_; }
  TaskKind task() const noexcept { return task_; }
  std::size_t samples() const noexcept { return static_cast<std::size_t>(x_.rows()); }
  std::size_t features() const noexcept { return static_cast<std::size_t>(x_.cols()); }

  /// Column means and sums of X.
  const Vector& column_mean() const noexcept { return column_mean_; }
  const Vector& column_sum() const noexcept { return column_sum_; }
  /// X times the column means.
  const Vector& mean_scores() const noexcept { return mean_scores_; }

  /// Eigendecomposition of X X^T.
  const SymmetricSpectrum& gram_spectrum() const;

  /// True when the centered spectrum is taken on the sample side (m <= N).
  bool centered_on_samples() const noexcept { return samples() <= features(); }
  /// Eigendecomposition of the smaller Gram matrix of the column-centered
  /// design Xc = X - 1 mean^T: Xc Xc^T when m <= N, else Xc^T Xc.
  const SymmetricSpectrum& centered_spectrum() const;

 private:
  Matrix x_;
  Vector y_;
  Matrix gram_;
  Vector column_mean_;
  Vector column_sum_;
  Vector mean_scores_;
  Shape shape_;
  TaskKind task_;
  mutable std::once_flag gram_once_;
  mutable std::once_flag centered_once_;
  mutable SymmetricSpectrum gram_spectrum_;
  mutable SymmetricSpectrum centered_spectrum_;
};

}  // namespace tracenorm
