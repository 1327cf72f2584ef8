#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tracenorm/tensor.hpp"

namespace tracenorm {

/// Inputs of the excess-risk bounds. B bounds ||W^0||_F, lipschitz is the
/// loss constant Lambda, delta the failure probability; c1, c2 and big_c are
/// the unspecified absolute constants.
struct BoundInputs {
  Shape shape;
  std::vector<std::size_t> ranks;
  std::size_t samples = 1;
  double radius = 1.0;
  double lipschitz = 1.0;
  double delta = 0.1;
  double c1 = 1.0;
  double c2 = 1.0;
  double big_c = 1.0;

  void validate() const;
};

enum class BoundKind { Overlapped, Latent, ScaledLatent, ScaledOverlapped };

std::string to_string(BoundKind kind);

struct BoundReport {
  BoundKind kind = BoundKind::Overlapped;
  double complexity = 0.0;
  double confidence = 0.0;
  double value = 0.0;
  /// Mode (0-based) attaining the min/max over modes inside the bound, and
  /// the mode attaining the min over ranks where the bound has one.
  std::size_t dimension_mode = 0;
  std::size_t rank_mode = 0;
};

/// c2 sqrt(log(2/delta) / (2m)).
double confidence_term(std::size_t samples, double delta, double c2 = 1.0);

/// c1 Lambda B / sqrt(m) (sum_k sqrt(r_k)) min_k (sqrt(n_k) + sqrt(n_\k)) + confidence.
BoundReport bound_overlapped(const BoundInputs& in);
/// c1 Lambda B sqrt(min_k r_k / m) (max_k (sqrt(n_k) + sqrt(n_\k)) + C sqrt(2 log K)) + confidence.
BoundReport bound_latent(const BoundInputs& in);
/// c1 Lambda B sqrt(min_k (r_k / n_k) / m) (max_k (n_k + sqrt(N)) + C sqrt(2 log K)) + confidence.
BoundReport bound_scaled_latent(const BoundInputs& in);
/// c1 Lambda B / sqrt(m) (sum_k sqrt(r_k / n_k)) min_k (n_k + sqrt(N)) + confidence.
BoundReport bound_scaled_overlapped(const BoundInputs& in);

BoundReport evaluate_bound(BoundKind kind, const BoundInputs& in);

/// (2 / m) Lambda B0 E||M||_* + sqrt(log(2/delta) / (2m)).
double generic_excess_bound(double dual_norm_mean, double b0, double lipschitz,
                            std::size_t samples, double delta);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Monte-Carlo estimates of E||M||_*^dual for M = sum_i sigma_i X_i with
/// standard Gaussian X_i and Rademacher sigma_i, all three surrogates on the
/// same draws:
///   overlapped  min_k ||M_(k)||_op   (an upper bound on the overlapped dual norm)
///   latent      max_k ||M_(k)||_op
///   scaled      max_k sqrt(n_k) ||M_(k)||_op
struct DualNormEstimate {
  MonteCarloEstimate overlapped;
  MonteCarloEstimate latent;
  MonteCarloEstimate scaled;
  std::size_t trials = 0;
  /// Per-trial values, in trial order.
  std::vector<double> overlapped_samples;
  std::vector<double> latent_samples;
  std::vector<double> scaled_samples;
};

/// Trials are independent; trial t draws from an RNG seeded by (seed, t), so
/// results do not depend on `threads`.
DualNormEstimate estimate_dual_norm_expectation(const Shape& shape, std::size_t samples,
                                                std::size_t trials, std::uint64_t seed,
                                                std::size_t threads = 1);

/// sqrt(m) max_k (sqrt(n_k) + sqrt(n_\k)) + C sqrt(2 m log K): the expectation
/// bound on max_k ||M_(k)||_op used by the latent-norm analysis.
double latent_dual_norm_expectation_bound(const Shape& shape, std::size_t samples,
                                          double big_c = 1.0);

/// One CSV line per report: norm,shape,ranks,m,B,Lambda,delta,c1,c2,C,complexity,confidence,total.
std::string bound_csv_header();
std::string bound_csv_row(const BoundReport& report, const BoundInputs& in);

}  // namespace tracenorm
