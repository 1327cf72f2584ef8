#include "tracenorm/config.hpp"

#include <cmath>

#include "tracenorm/error.hpp"

namespace tracenorm {

void SolverConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be positive");
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("tolerance must lie in (0, 1)");
  if (max_outer_iters == 0) throw ConfigError("max_outer_iters must be positive");
  if (newton.max_iters == 0) throw ConfigError("newton.max_iters must be positive");
  if (!(newton.backtrack > 0.0 && newton.backtrack < 1.0))
    throw ConfigError("newton.backtrack must lie in (0, 1)");
  if (!(newton.armijo > 0.0 && newton.armijo < 0.5)) throw ConfigError("newton.armijo must lie in (0, 0.5)");
  if (!(newton.interior_margin > 0.0 && newton.interior_margin < 1.0))
    throw ConfigError("newton.interior_margin must lie in (0, 1)");
  if (!(newton.tol > 0.0)) throw ConfigError("newton.tol must be positive");
}

std::string to_string(BetaRule rule) { return rule == BetaRule::Fixed ? "fixed" : "lambda_scaled"; }

BetaRule beta_rule_from_string(const std::string& name) {
  if (name == "fixed") return BetaRule::Fixed;
  if (name == "lambda_scaled") return BetaRule::LambdaScaled;
  throw ConfigError("unknown beta rule '" + name + "' (expected fixed or lambda_scaled)");
}

}  // namespace tracenorm
