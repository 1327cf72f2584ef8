#include "tracenorm/design.hpp"

#include "tracenorm/error.hpp"

namespace tracenorm {

Design::Design(const Dataset& data) : task_(data.task) {
  data.validate();
  shape_ = data.shape();
  const auto m = static_cast<Eigen::Index>(data.size());
  const auto n = static_cast<Eigen::Index>(element_count(shape_));
  x_.resize(m, n);
  y_.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    x_.row(i) = data.covariates[static_cast<std::size_t>(i)].vec().transpose();
    y_(i) = data.targets[static_cast<std::size_t>(i)];
  }
  gram_ = Matrix::Zero(m, m);
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(x_);
  gram_.triangularView<Eigen::StrictlyUpper>() = gram_.transpose();
  column_sum_ = x_.colwise().sum().transpose();
  column_mean_ = column_sum_ / static_cast<double>(m);
  mean_scores_ = x_ * column_mean_;
}

const SymmetricSpectrum& Design::gram_spectrum() const {
  std::call_once(gram_once_, [this] { gram_spectrum_ = SymmetricSpectrum(gram_); });
  return gram_spectrum_;
}

const SymmetricSpectrum& Design::centered_spectrum() const {
  std::call_once(centered_once_, [this] {
    if (centered_on_samples()) {
      // Xc Xc^T = G - g 1^T - 1 g^T + (mean^T mean) 1 1^T with g = X mean.
      const Vector& g = mean_scores_;
      Matrix c = gram_;
      c.colwise() -= g;
      c.rowwise() -= g.transpose();
      c.array() += column_mean_.squaredNorm();
      centered_spectrum_ = SymmetricSpectrum(c);
    } else {
      Matrix c = Matrix::Zero(x_.cols(), x_.cols());
      c.selfadjointView<Eigen::Lower>().rankUpdate(x_.transpose());
      c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
      c -= static_cast<double>(samples()) * column_mean_ * column_mean_.transpose();
      centered_spectrum_ = SymmetricSpectrum(c);
    }
  });
  return centered_spectrum_;
}

}  // namespace tracenorm
