#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "tracenorm/config.hpp"
#include "tracenorm/design.hpp"
#include "tracenorm/model.hpp"
#include "tracenorm/norm_kind.hpp"

namespace tracenorm {

struct IterationRecord {
  double primal = 0.0;
  double dual = 0.0;
  double relative_gap = 0.0;
};

struct FitReport {
  std::size_t iterations = 0;
  std::vector<IterationRecord> trace;
  /// ||V(alpha)_(k)||_op per active mode at the returned iterate.
  std::vector<double> final_spectral_norms;
  bool converged = false;
  double final_gap = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double seconds = 0.0;
  std::string message;
};

struct FitResult {
  Model model;
  FitReport report;
};

/// Relative duality gap at a primal iterate together with the dual-feasible
/// rescaling alpha_hat it was evaluated at.
struct DualityGap {
  double relative_gap = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  Vector alpha_hat;
  std::vector<double> spectral_norms;
};

/// Makes alpha satisfy sum_i alpha_i = 0 (and the [0,1] box on y_i alpha_i for
/// classification) without leaving the box: regression centers, classification
/// clips and then shrinks the heavier label group.
Vector balance_dual(const Vector& alpha, const Vector& y, TaskKind task);

/// Scales a balanced alpha by min(1, min_k lambda_k / ||V(alpha)_(k)||_op),
/// with V(alpha) = sum_i alpha_i X_i, and evaluates the relative gap
/// (primal - dual(alpha_hat)) / primal. Throws NumericalError if primal <= 0.
/// `combination`, if given, must equal sum_i alpha_i X_i and saves one pass over X.
DualityGap relative_duality_gap(const Design& design, const Vector& alpha,
                                const std::vector<std::size_t>& modes,
                                const std::vector<double>& mode_lambdas, double primal,
                                const Vector* combination = nullptr);

/// ADMM on the dual of latent-type trace-norm learning. The multipliers of
/// the constraints V^(k) = sum_i alpha_i X_i and sum_i alpha_i = 0 are the
/// primal latent parts W^(k) and the bias b.
///
/// Each outer step updates alpha (Cholesky solve for regression, damped
/// Newton for classification), then V^(k) by spectral clipping and W^(k)
/// by the matching multiplier step, then b.
class DualAdmm {
 public:
  DualAdmm(const Design& design, const NormKind& norm, const SolverConfig& cfg);

  std::size_t active_modes() const noexcept { return modes_.size(); }
  std::size_t mode(std::size_t j) const { return modes_.at(j); }
  double mode_lambda(std::size_t j) const { return lambdas_.at(j); }
  const std::vector<double>& mode_lambdas() const noexcept { return lambdas_; }
  /// Penalty in use (see BetaRule).
  double beta() const noexcept { return beta_; }

  const Vector& alpha() const noexcept { return alpha_; }
  const Vector& aux(std::size_t j) const { return v_.at(j); }
  const Vector& latent(std::size_t j) const { return w_.at(j); }
  double bias() const noexcept { return bias_; }

  /// Overwrites the iterate; sizes must match.
  void set_state(const Vector& alpha, const std::vector<Vector>& aux,
                 const std::vector<Vector>& latent, double bias);

  /// sum_i alpha_i X_i as a flat vector.
  Vector combination(const Vector& alpha) const;

  void update_alpha();
  /// Solves (K beta X X^T + I + beta 1 1^T) alpha = y - X vec(W_bar) + beta X vec(V_bar) - b 1.
  void update_alpha_regression();
  /// Damped Newton on the augmented Lagrangian in alpha, kept strictly inside 0 < y_i alpha_i < 1.
  void update_alpha_logistic();
  /// V^(k) = proj_{lambda_k}(W^(k)_(k) / beta + sum_i alpha_i X_i(k)). Uses the current alpha and W.
  void update_aux(std::size_t j);
  /// W^(k) += beta (sum_i alpha_i X_i - V^(k)).
  void update_latent_two_step(std::size_t j);
  /// W^(k)_(k) = prox_{beta lambda_k}(W^(k)_(k) + beta sum_i alpha_i X_i(k)); also sets V^(k).
  void update_latent_combined(std::size_t j);
  /// b += beta sum_i alpha_i.
  void update_bias();

  /// One outer iteration.
  void step();

  /// Augmented Lagrangian as a function of alpha with V, W, b fixed at the
  /// current iterate (minimization form), and its derivatives.
  double alpha_lagrangian(const Vector& alpha) const;
  Vector alpha_gradient(const Vector& alpha) const;
  Matrix alpha_hessian(const Vector& alpha) const;

  /// Primal objective (half-scaled squared or logistic loss) at the current W, b.
  double primal_value() const;
  DualityGap duality_gap() const;

  Model model() const;
  std::size_t newton_iterations() const noexcept { return newton_iterations_; }

 private:
  Vector alpha_linear_term() const;
  /// X vec(sum_k W^(k)) and X vec(sum_k V^(k)), refreshed lazily after W or V change.
  void refresh_products() const;

  const Design& design_;
  NormKind norm_;
  SolverConfig cfg_;
  double beta_ = 1.0;
  std::vector<std::size_t> modes_;
  std::vector<double> lambdas_;
  /// (K beta G + I)^{-1} 1, for the rank-one bias term of the alpha system.
  Vector ones_solve_;
  Vector alpha_;
  Vector combo_;
  std::vector<Vector> v_;
  std::vector<Vector> w_;
  double bias_ = 0.0;
  std::size_t newton_iterations_ = 0;
  mutable bool products_valid_ = false;
  mutable Vector xw_;
  mutable Vector xv_;
};

FitResult fit_dual_admm(const Design& design, const NormKind& norm, const SolverConfig& cfg);

/// Per-mode splitting ADMM for the overlapped trace norm:
///   min loss(W, b) + sum_k lambda_k ||Z^(k)_(k)||_tr  s.t.  Z^(k) = W.
/// The scaled multipliers give a dual certificate, so the stopping rule is
/// the same relative duality gap as the dual solver.
class OverlappedAdmm {
 public:
  OverlappedAdmm(const Design& design, const NormKind& norm, const SolverConfig& cfg);

  /// W,b-step (exact solve for squared loss, Newton-CG for logistic), Z-step, multiplier step.
  void step();
  double primal_value() const;
  DualityGap duality_gap() const;
  Model model() const;

  const Vector& weight() const noexcept { return w_; }
  double bias() const noexcept { return bias_; }
  const Vector& split(std::size_t j) const { return z_.at(j); }
  double beta() const noexcept { return beta_; }

 private:
  void update_weight_squared();
  void update_weight_logistic();

  const Design& design_;
  NormKind norm_;
  SolverConfig cfg_;
  std::vector<std::size_t> modes_;
  std::vector<double> lambdas_;
  Vector w_;
  double bias_ = 0.0;
  double beta_ = 1.0;
  std::vector<Vector> z_;
  std::vector<Vector> u_;
  /// X^T (y - mean(y)), fixed for the squared loss.
  Vector centered_rhs_;
  /// X w + b at the current iterate.
  Vector scores_;
};

FitResult fit_overlapped_primal_admm(const Design& design, const NormKind& norm,
                                     const SolverConfig& cfg);

/// Closed-form l2-regularized least squares with bias:
///   min (1/2) sum_i (y_i - <W, X_i> - b)^2 + (lambda / 2) ||W||_F^2.
FitResult fit_ridge(const Design& design, double lambda);

/// Dispatches on norm.family.
FitResult fit(const Design& design, const NormKind& norm, const SolverConfig& cfg);

}  // namespace tracenorm
