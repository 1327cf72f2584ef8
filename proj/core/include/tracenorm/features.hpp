#pragma once

#include <vector>

#include "tracenorm/tensor.hpp"

namespace tracenorm {

/// Channel-by-channel covariance of a C x T signal: S_hat = S (I - 11^T / T) / sqrt(T - 1),
/// returns S_hat S_hat^T. Throws ShapeError for T < 2.
Matrix covariance_features(const Matrix& signal);

/// Stacks Z matrices of a common C1 x C2 shape into a Z x C1 x C2 tensor whose
/// slice z along mode 0 equals mats[z].
DenseTensor stack_feature_tensor(const std::vector<Matrix>& mats);

/// Slice z along mode 0 of a 3-way tensor.
Matrix feature_slice(const DenseTensor& t, std::size_t z);

}  // namespace tracenorm
