#pragma once

#include <span>
#include <vector>

#include "tracenorm/config.hpp"
#include "tracenorm/tensor.hpp"

namespace tracenorm {

struct LatentNormResult {
  /// Value of the returned decomposition; never above the best single-mode
  /// decomposition min_k w_k ||t_(k)||_tr.
  double value = 0.0;
  /// Value reached by the ADMM iterates before the single-mode safeguard.
  double admm_value = 0.0;
  /// Dual lower bound <t, V> with ||V_(k)||_op <= w_k for all k.
  double lower_bound = 0.0;
  /// Parts summing to t, one per mode.
  std::vector<DenseTensor> parts;
  std::size_t iterations = 0;
  bool converged = false;
  /// ||sum_k parts_k - t||_F of the ADMM split variables at exit.
  double residual = 0.0;
};

/// inf over t = sum_k W^(k) of sum_k w_k ||W^(k)_(k)||_tr, evaluated by ADMM
/// on the decomposition with penalty cfg.beta and tolerance cfg.tol. Weights
/// of ones give the latent trace norm, 1/sqrt(n_k) the scaled latent norm.
LatentNormResult latent_norm_value(const DenseTensor& t, std::span<const double> mode_weights,
                                   const SolverConfig& cfg);

}  // namespace tracenorm
