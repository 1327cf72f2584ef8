#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace tracenorm {

struct NewtonConfig {
  std::size_t max_iters = 100;
  /// Step shrink factor for backtracking.
  double backtrack = 0.5;
  /// Sufficient-decrease constant of the Armijo rule.
  double armijo = 1e-4;
  /// Fraction of the distance to the box boundary a step may cover.
  double interior_margin = 0.99;
  /// Gradient-norm stopping threshold of the inner solve.
  double tol = 1e-8;
};

/// How the ADMM penalty is derived from `beta`. It is held fixed within a run
/// either way.
///   Fixed          beta as given
///   LambdaScaled   beta / lambda for the dual solver, beta * lambda for the
///                  overlapped primal solver
enum class BetaRule { Fixed, LambdaScaled };

struct SolverConfig {
  double lambda = 1.0;
  /// ADMM penalty.
  double beta = 1.0;
  BetaRule beta_rule = BetaRule::Fixed;
  /// Relative duality-gap tolerance.
  double tol = 1e-3;
  std::size_t max_outer_iters = 5000;
  NewtonConfig newton;
  /// Seeds fold shuffling in cross-validation; the solvers are deterministic.
  std::uint64_t seed = 0;
  /// Keep per-iteration primal/dual/gap values in the FitReport.
  bool record_trace = true;

  /// Penalties actually used by the two ADMM solvers.
  double dual_beta() const { return beta_rule == BetaRule::Fixed ? beta : beta / lambda; }
  double primal_beta() const { return beta_rule == BetaRule::Fixed ? beta : beta * lambda; }

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

std::string to_string(BetaRule rule);
BetaRule beta_rule_from_string(const std::string& name);

}  // namespace tracenorm
