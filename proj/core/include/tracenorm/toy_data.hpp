#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "tracenorm/dataset.hpp"
#include "tracenorm/tensor.hpp"

namespace tracenorm {

/// Weight-tensor setups of the synthetic regression study:
///   A  shape (10,10,10), ranks (3,3,3)
///   B  shape (10,10,10), ranks (3,5,8)
///   C  shape (4,10,10),  ranks (3,4,8)
enum class ToySetup { A, B, C };

std::string to_string(ToySetup setup);
ToySetup toy_setup_from_string(const std::string& name);
TuckerSpec toy_setup_spec(ToySetup setup);

struct ToyRegressionSpec {
  ToySetup setup = ToySetup::A;
  std::size_t m_train = 200;
  std::size_t m_val = 200;
  std::size_t m_test = 500;
  /// Standard deviation of the additive Gaussian noise (variance 0.1 by default).
  double noise_std = 0.31622776601683794;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ToyData {
  Dataset train;
  Dataset val;
  Dataset test;
  DenseTensor true_weight;
};

/// W from tucker_random, covariates i.i.d. N(0,1), y_i = <W, X_i> + noise.
ToyData gen_toy_regression(const ToyRegressionSpec& spec);

}  // namespace tracenorm
