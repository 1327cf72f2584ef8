#include <chrono>

#include "tracenorm/error.hpp"
#include "tracenorm/linalg.hpp"
#include "tracenorm/losses.hpp"
#include "tracenorm/solvers.hpp"

namespace tracenorm {

FitResult fit_ridge(const Design& design, double lambda) {
  const auto start = std::chrono::steady_clock::now();
  if (!(lambda >= 0.0)) throw ConfigError("ridge lambda must be non-negative");
  if (design.task() != TaskKind::Regression) throw ConfigError("ridge regression needs regression targets");
  const Matrix& x = design.x();
  const Vector& mean = design.column_mean();
  const double y_mean = design.y().mean();
  Vector yc = design.y();
  yc.array() -= y_mean;

  // Centering absorbs the bias; the shared spectrum of the centered design
  // covers every lambda.
  Vector w;
  if (design.centered_on_samples()) {
    const Vector coef = design.centered_spectrum().solve_shifted(yc, 1.0, lambda);
    w = x.transpose() * coef - mean * coef.sum();
  } else {
    w = design.centered_spectrum().solve_shifted(Vector(x.transpose() * yc), 1.0, lambda);
  }

  FitResult result;
  result.model.norm = NormKind::ridge();
  result.model.lambda = lambda;
  result.model.task = TaskKind::Regression;
  result.model.weight = DenseTensor::from_vector(design.shape(), w);
  result.model.bias = y_mean - mean.dot(w);

  Vector scores = x * w;
  scores.array() += result.model.bias;
  const auto m = static_cast<std::size_t>(scores.size());
  FitReport& report = result.report;
  report.iterations = 1;
  report.converged = true;
  report.primal = empirical_loss({scores.data(), m}, {design.y().data(), m}, TaskKind::Regression,
                                 SquaredLossScale::Half) +
                  0.5 * lambda * w.squaredNorm();
  report.dual = report.primal;
  report.message = "closed form";
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

FitResult fit(const Design& design, const NormKind& norm, const SolverConfig& cfg) {
  switch (norm.family) {
    case NormFamily::LatentType: return fit_dual_admm(design, norm, cfg);
    case NormFamily::Overlapped: return fit_overlapped_primal_admm(design, norm, cfg);
    case NormFamily::Ridge: return fit_ridge(design, cfg.lambda);
  }
  throw ConfigError("unknown norm family");
}

}  // namespace tracenorm
