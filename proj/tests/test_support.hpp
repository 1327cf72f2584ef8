#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "tracenorm/dataset.hpp"
#include "tracenorm/tensor.hpp"

namespace tracenorm::fixtures {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline Vector random_vector(Eigen::Index n, std::mt19937_64& rng) { return random_matrix(n, 1, rng); }

// y_i = <W, X_i> + bias + noise with standard Gaussian X_i.
inline Dataset regression_data(const DenseTensor& w, std::size_t m, double noise, double bias,
                               std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Dataset d;
  d.task = TaskKind::Regression;
  for (std::size_t i = 0; i < m; ++i) {
    DenseTensor x = gaussian_tensor(w.shape(), rng);
    d.targets.push_back(inner(w, x) + bias + noise * normal(rng));
    d.covariates.push_back(std::move(x));
  }
  return d;
}

// Labels sign(<W, X_i> + noise), with both classes forced present.
inline Dataset classification_data(const DenseTensor& w, std::size_t m, double noise, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Dataset d;
  d.task = TaskKind::Classification;
  for (std::size_t i = 0; i < m; ++i) {
    DenseTensor x = gaussian_tensor(w.shape(), rng);
    double s = inner(w, x) + noise * normal(rng);
    if (i == 0) s = 1.0;
    if (i == 1) s = -1.0;
    d.targets.push_back(s >= 0.0 ? 1.0 : -1.0);
    d.covariates.push_back(std::move(x));
  }
  return d;
}

inline double relative_difference(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace tracenorm::fixtures
