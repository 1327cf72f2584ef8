#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "tracenorm/error.hpp"
#include "tracenorm/linalg.hpp"
#include "tracenorm/losses.hpp"
#include "tracenorm/solvers.hpp"

namespace tracenorm {

namespace {

std::span<const double> as_span(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Matrix unfold_vec(const Vector& v, const Shape& shape, std::size_t mode) {
  return unfold(as_span(v), shape, mode);
}

Vector fold_vec(const Matrix& m, std::size_t mode, const Shape& shape) {
  Vector out(static_cast<Eigen::Index>(element_count(shape)));
  fold_into(m, mode, shape, std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

double sigmoid(double z) { return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

}  // namespace

OverlappedAdmm::OverlappedAdmm(const Design& design, const NormKind& norm, const SolverConfig& cfg)
    : design_(design), norm_(norm), cfg_(cfg) {
  cfg_.validate();
  if (norm_.family != NormFamily::Overlapped)
    throw ConfigError("primal ADMM handles overlapped norms only");
  norm_.validate(design_.shape().size());
  modes_ = norm_.modes;
  lambdas_ = norm_.mode_lambdas(cfg_.lambda);

  const auto n = static_cast<Eigen::Index>(design_.features());
  beta_ = cfg_.primal_beta();
  w_ = Vector::Zero(n);
  z_.assign(modes_.size(), Vector::Zero(n));
  u_.assign(modes_.size(), Vector::Zero(n));
  scores_ = Vector::Zero(static_cast<Eigen::Index>(design_.samples()));
  if (design_.task() == TaskKind::Regression) {
    Vector centered_y = design_.y();
    centered_y.array() -= centered_y.mean();
    centered_rhs_ = design_.x().transpose() * centered_y;
  }
}

// With b eliminated, the W-step solves (Xc^T Xc + K rho I) w = Xc^T yc + rho c
// for the column-centered design Xc, on whichever side of Xc is smaller.
void OverlappedAdmm::update_weight_squared() {
  const Matrix& x = design_.x();
  const Vector& mean = design_.column_mean();
  const double mu = static_cast<double>(modes_.size()) * beta_;
  Vector target = Vector::Zero(w_.size());
  for (std::size_t j = 0; j < modes_.size(); ++j) target += z_[j] - u_[j];
  const Vector r = centered_rhs_ + beta_ * target;
  const SymmetricSpectrum& spectrum = design_.centered_spectrum();
  if (design_.centered_on_samples()) {
    // (Xc^T Xc + mu I)^{-1} r = (r - Xc^T (Xc Xc^T + mu I)^{-1} Xc r) / mu
    Vector xr = x * r;
    Vector ar = xr;
    ar.array() -= mean.dot(r);
    const Vector s = spectrum.solve_shifted(ar, 1.0, mu);
    const double s_sum = s.sum();
    Vector ats = x.transpose() * s;
    ats -= mean * s_sum;
    w_ = (r - ats) / mu;
    // X w from quantities already at hand: X Xc^T s = G s - (X mean) 1^T s.
    scores_ = (xr - design_.gram() * s + design_.mean_scores() * s_sum) / mu;
  } else {
    w_ = spectrum.solve_shifted(r, 1.0, mu);
    scores_ = x * w_;
  }
  bias_ = design_.y().mean() - mean.dot(w_);
  scores_.array() += bias_;
}

// Newton-CG on (w, b) for
//   sum_i log(1 + exp(-y_i (x_i^T w + b))) + (rho / 2) sum_k ||w - z_k + u_k||^2.
void OverlappedAdmm::update_weight_logistic() {
  const Matrix& x = design_.x();
  const Vector& y = design_.y();
  const NewtonConfig& nc = cfg_.newton;
  const double rho = beta_;
  const double kk = static_cast<double>(modes_.size());
  const auto n = w_.size();
  const auto m = y.size();
  std::vector<Vector> centers(modes_.size());
  for (std::size_t j = 0; j < modes_.size(); ++j) centers[j] = z_[j] - u_[j];

  auto objective = [&](const Vector& w, double b) {
    Vector s = x * w;
    s.array() += b;
    double f = empirical_loss(as_span(s), as_span(y), TaskKind::Classification, SquaredLossScale::Unit);
    for (const auto& c : centers) f += 0.5 * rho * (w - c).squaredNorm();
    return f;
  };

  for (std::size_t it = 0; it < nc.max_iters; ++it) {
    Vector s = x * w_;
    s.array() += bias_;
    Vector residual(m);
    Vector curvature(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double p = sigmoid(-y(i) * s(i));
      residual(i) = -y(i) * p;
      curvature(i) = p * (1.0 - p);
    }
    Vector grad(n + 1);
    grad.head(n) = x.transpose() * residual;
    for (const auto& c : centers) grad.head(n) += rho * (w_ - c);
    grad(n) = residual.sum();
    const double gnorm = grad.norm();
    if (gnorm <= nc.tol) break;

    const LinearOperator hessian = [&](const Vector& v) {
      Vector xv = x * v.head(n);
      xv.array() += v(n);
      const Vector dxv = curvature.cwiseProduct(xv);
      Vector out(n + 1);
      out.head(n) = x.transpose() * dxv + kk * rho * v.head(n);
      out(n) = dxv.sum() + 1e-12 * v(n);
      return out;
    };
    const CgResult cg = cg_solve(hessian, -grad, std::min(0.1, std::sqrt(gnorm)), 4 * (n + 1));
    const Vector& d = cg.x;
    const double slope = grad.dot(d);
    if (!(slope < 0.0)) break;

    const double f0 = objective(w_, bias_);
    double t = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt, t *= nc.backtrack) {
      const Vector w_trial = w_ + t * d.head(n);
      const double b_trial = bias_ + t * d(n);
      if (objective(w_trial, b_trial) <= f0 + nc.armijo * t * slope) {
        w_ = w_trial;
        bias_ = b_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  scores_ = x * w_;
  scores_.array() += bias_;
}

void OverlappedAdmm::step() {
  if (design_.task() == TaskKind::Regression)
    update_weight_squared();
  else
    update_weight_logistic();
  for (std::size_t j = 0; j < modes_.size(); ++j) {
    const Vector arg = w_ + u_[j];
    z_[j] = fold_vec(sv_soft_threshold(unfold_vec(arg, design_.shape(), modes_[j]), lambdas_[j] / beta_),
                     modes_[j], design_.shape());
    u_[j] = arg - z_[j];
  }
}

double OverlappedAdmm::primal_value() const {
  double value = empirical_loss(as_span(scores_), as_span(design_.y()), design_.task(), SquaredLossScale::Half);
  for (std::size_t j = 0; j < modes_.size(); ++j)
    value += lambdas_[j] * trace_norm(unfold_vec(w_, design_.shape(), modes_[j]));
  return value;
}

// Dual certificate: alpha is the negative loss gradient at the current
// scores; rho u_k split X^T alpha across modes (exactly at a fixed point), the
// mismatch is spread evenly, and everything is scaled into the spectral balls.
DualityGap OverlappedAdmm::duality_gap() const {
  const double primal = primal_value();
  if (!(primal > 0.0)) throw NumericalError("primal objective is not positive; relative gap undefined");
  const Vector& y = design_.y();
  Vector alpha(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i)
    alpha(i) = design_.task() == TaskKind::Regression ? y(i) - scores_(i) : y(i) * sigmoid(-y(i) * scores_(i));
  const Vector balanced = balance_dual(alpha, y, design_.task());
  const Vector combo = design_.x().transpose() * balanced;

  const double kk = static_cast<double>(modes_.size());
  Vector mismatch = combo;
  for (const auto& u : u_) mismatch -= beta_ * u;
  mismatch /= kk;

  DualityGap gap;
  gap.primal = primal;
  double scale = 1.0;
  for (std::size_t j = 0; j < modes_.size(); ++j) {
    const Vector part = beta_ * u_[j] + mismatch;
    const double op = spectral_norm(unfold_vec(part, design_.shape(), modes_[j]));
    gap.spectral_norms.push_back(op);
    if (op > lambdas_[j]) scale = std::min(scale, lambdas_[j] / op);
  }
  gap.alpha_hat = scale * balanced;
  gap.dual = dual_objective(as_span(gap.alpha_hat), as_span(y), design_.task());
  gap.relative_gap = (gap.primal - gap.dual) / gap.primal;
  return gap;
}

Model OverlappedAdmm::model() const {
  Model model;
  model.norm = norm_;
  model.lambda = cfg_.lambda;
  model.task = design_.task();
  model.bias = bias_;
  model.weight = DenseTensor::from_vector(design_.shape(), w_);
  return model;
}

FitResult fit_overlapped_primal_admm(const Design& design, const NormKind& norm, const SolverConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  OverlappedAdmm solver(design, norm, cfg);
  FitResult result;
  FitReport& report = result.report;
  double best_gap = std::numeric_limits<double>::infinity();
  DualityGap best;
  Model best_model;
  for (std::size_t it = 0; it < cfg.max_outer_iters; ++it) {
    solver.step();
    const DualityGap gap = solver.duality_gap();
    report.iterations = it + 1;
    if (cfg.record_trace) report.trace.push_back({gap.primal, gap.dual, gap.relative_gap});
    if (gap.relative_gap <= cfg.tol) {
      report.converged = true;
      best = gap;
      best_model = solver.model();
      break;
    }
    if (gap.relative_gap < best_gap) {
      best_gap = gap.relative_gap;
      best = gap;
      best_model = solver.model();
    }
  }
  result.model = std::move(best_model);
  report.final_gap = best.relative_gap;
  report.primal = best.primal;
  report.dual = best.dual;
  report.final_spectral_norms = best.spectral_norms;
  report.message = report.converged ? "converged" : "reached max_outer_iters; returning best iterate";
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace tracenorm
