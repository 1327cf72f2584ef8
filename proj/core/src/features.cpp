#include "tracenorm/features.hpp"

#include <cmath>

#include "tracenorm/error.hpp"

namespace tracenorm {

Matrix covariance_features(const Matrix& signal) {
  const auto t = signal.cols();
  if (t < 2) throw ShapeError("covariance features need at least two time points");
  Matrix centered = signal.colwise() - signal.rowwise().mean();
  centered /= std::sqrt(static_cast<double>(t - 1));
  Matrix out = centered * centered.transpose();
  return (out + out.transpose()) / 2.0;
}

DenseTensor stack_feature_tensor(const std::vector<Matrix>& mats) {
  if (mats.empty()) throw ShapeError("no matrices to stack");
  const auto rows = mats.front().rows();
  const auto cols = mats.front().cols();
  const std::size_t z = mats.size();
  DenseTensor out(Shape{z, static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)});
  for (std::size_t s = 0; s < z; ++s) {
    if (mats[s].rows() != rows || mats[s].cols() != cols) throw ShapeError("matrices differ in shape");
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i)
        out[s + z * (static_cast<std::size_t>(i) + static_cast<std::size_t>(rows) * static_cast<std::size_t>(j))] =
            mats[s](i, j);
  }
  return out;
}

Matrix feature_slice(const DenseTensor& t, std::size_t z) {
  if (t.order() != 3) throw ShapeError("feature tensor must have three modes");
  const std::size_t depth = t.dim(0);
  if (z >= depth) throw ShapeError("slice index out of range");
  Matrix out(static_cast<Eigen::Index>(t.dim(1)), static_cast<Eigen::Index>(t.dim(2)));
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      out(i, j) = t[z + depth * (static_cast<std::size_t>(i) + t.dim(1) * static_cast<std::size_t>(j))];
  return out;
}

}  // namespace tracenorm
