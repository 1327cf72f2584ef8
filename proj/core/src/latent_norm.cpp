#include "tracenorm/latent_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tracenorm/error.hpp"
#include "tracenorm/linalg.hpp"

namespace tracenorm {

namespace {

struct Shrunk {
  Matrix value;
  double trace = 0.0;
};

Shrunk shrink(const Matrix& m, double tau) {
  ThinSvd svd = thin_svd(m);
  const Vector s = (svd.s.array() - tau).max(0.0).matrix();
  return {svd.u * s.asDiagonal() * svd.v.transpose(), s.sum()};
}

}  // namespace

// Sharing-form ADMM on the unit-Frobenius input x = t / ||t||_F:
//   P^(k) = prox_{w_k/beta ||.||_tr,(k)}(Z^(k) - U^(k))
//   Z     = projection of P + U onto {sum_k Z^(k) = x}
//   U    += P - Z
// Working on x makes the result positively homogeneous in t.
LatentNormResult latent_norm_value(const DenseTensor& t, std::span<const double> mode_weights,
                                   const SolverConfig& cfg) {
  const std::size_t order = t.order();
  if (mode_weights.size() != order) throw ShapeError("need one weight per mode");
  for (double w : mode_weights)
    if (!(w > 0.0)) throw ConfigError("mode weights must be positive");
  if (!(cfg.tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (!(cfg.beta > 0.0)) throw ConfigError("beta must be positive");

  LatentNormResult result;
  const double scale = frobenius(t);
  const Shape& shape = t.shape();
  if (scale == 0.0) {
    result.parts.assign(order, DenseTensor(shape));
    result.converged = true;
    return result;
  }

  const Vector x = t.vec() / scale;
  const auto n = x.size();
  const double kk = static_cast<double>(order);
  std::vector<Vector> p(order, Vector::Zero(n));
  std::vector<Vector> z(order, x / kk);
  std::vector<Vector> u(order, Vector::Zero(n));
  Vector folded(n);

  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < cfg.max_outer_iters; ++it) {
    double value = 0.0;
    for (std::size_t k = 0; k < order; ++k) {
      const Vector arg = z[k] - u[k];
      Shrunk s = shrink(unfold(std::span<const double>(arg.data(), arg.size()), shape, k),
                        mode_weights[k] / cfg.beta);
      fold_into(s.value, k, shape, std::span<double>(p[k].data(), p[k].size()));
      value += mode_weights[k] * s.trace;
    }
    Vector excess = -x;
    for (std::size_t k = 0; k < order; ++k) excess += p[k] + u[k];
    excess /= kk;
    Vector sum_p = Vector::Zero(n);
    for (std::size_t k = 0; k < order; ++k) {
      z[k] = p[k] + u[k] - excess;
      u[k] += p[k] - z[k];
      sum_p += p[k];
    }
    result.iterations = it + 1;
    result.residual = (sum_p - x).norm();
    const double change = std::abs(value - previous) / std::max(value, 1e-300);
    previous = value;
    if (change < cfg.tol && result.residual < cfg.tol) {
      result.converged = true;
      break;
    }
  }

  // Value of the feasible split Z (sum_k Z^(k) = x exactly).
  double admm_value = 0.0;
  for (std::size_t k = 0; k < order; ++k)
    admm_value += mode_weights[k] *
                  trace_norm(unfold(std::span<const double>(z[k].data(), z[k].size()), shape, k));

  // Dual certificate: the common multiplier of the sharing constraint.
  Vector y = Vector::Zero(n);
  for (std::size_t k = 0; k < order; ++k) y -= u[k];
  y *= cfg.beta / kk;
  double feasible_scale = 1.0;
  for (std::size_t k = 0; k < order; ++k) {
    const double op = spectral_norm(unfold(std::span<const double>(y.data(), y.size()), shape, k));
    if (op > mode_weights[k]) feasible_scale = std::min(feasible_scale, mode_weights[k] / op);
  }
  result.lower_bound = scale * feasible_scale * x.dot(y);

  std::size_t best_single = order;
  double best_value = admm_value;
  for (std::size_t k = 0; k < order; ++k) {
    const double single = mode_weights[k] * trace_norm(unfold(t, k)) / scale;
    if (single < best_value) {
      best_value = single;
      best_single = k;
    }
  }

  result.admm_value = scale * admm_value;
  result.value = scale * best_value;
  result.parts.reserve(order);
  for (std::size_t k = 0; k < order; ++k) {
    if (best_single < order)
      result.parts.push_back(k == best_single ? t : DenseTensor(shape));
    else
      result.parts.push_back(DenseTensor::from_vector(shape, z[k] * scale));
  }
  return result;
}

}  // namespace tracenorm
