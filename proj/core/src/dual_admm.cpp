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

// Interior starting point for the logistic dual: y_i alpha_i = 1/2, then the
// larger label group is shrunk so that sum_i alpha_i = 0.
Vector logistic_initial_alpha(const Vector& y) {
  Vector alpha = 0.5 * y;
  double plus = 0.0;
  double minus = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) (y(i) > 0 ? plus : minus) += 0.5;
  if (plus == 0.0 || minus == 0.0)
    throw ConfigError("classification data must contain both labels");
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) > 0 && plus > minus) alpha(i) *= minus / plus;
    if (y(i) < 0 && minus > plus) alpha(i) *= plus / minus;
  }
  return alpha;
}

double log_odds(double p) { return std::log(p) - std::log1p(-p); }

}  // namespace

Vector balance_dual(const Vector& alpha, const Vector& y, TaskKind task) {
  if (alpha.size() != y.size()) throw ShapeError("alpha and y lengths differ");
  if (task == TaskKind::Regression) return (alpha.array() - alpha.mean()).matrix();
  Vector out(alpha.size());
  double plus = 0.0;
  double minus = 0.0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double p = std::clamp(y(i) * alpha(i), 0.0, 1.0);
    out(i) = y(i) * p;
    (y(i) > 0 ? plus : minus) += p;
  }
  if (plus > minus && plus > 0.0) {
    for (Eigen::Index i = 0; i < out.size(); ++i)
      if (y(i) > 0) out(i) *= minus / plus;
  } else if (minus > plus && minus > 0.0) {
    for (Eigen::Index i = 0; i < out.size(); ++i)
      if (y(i) < 0) out(i) *= plus / minus;
  }
  return out;
}

DualityGap relative_duality_gap(const Design& design, const Vector& alpha,
                                const std::vector<std::size_t>& modes,
                                const std::vector<double>& mode_lambdas, double primal,
                                const Vector* combination) {
  if (!(primal > 0.0)) throw NumericalError("primal objective is not positive; relative gap undefined");
  if (!alpha.allFinite()) throw NumericalError("dual iterate is not finite");
  DualityGap gap;
  gap.primal = primal;
  const Vector balanced = balance_dual(alpha, design.y(), design.task());
  // Centering shifts the combination by a multiple of the column sums.
  const Vector combo = combination && design.task() == TaskKind::Regression
                           ? Vector(*combination - alpha.mean() * design.column_sum())
                           : Vector(design.x().transpose() * balanced);
  double scale = 1.0;
  gap.spectral_norms.reserve(modes.size());
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const double op = spectral_norm(unfold_vec(combo, design.shape(), modes[j]));
    gap.spectral_norms.push_back(op);
    if (op > mode_lambdas[j]) scale = std::min(scale, mode_lambdas[j] / op);
  }
  gap.alpha_hat = scale * balanced;
  gap.dual = dual_objective(as_span(gap.alpha_hat), as_span(design.y()), design.task());
  gap.relative_gap = (gap.primal - gap.dual) / gap.primal;
  return gap;
}

DualAdmm::DualAdmm(const Design& design, const NormKind& norm, const SolverConfig& cfg)
    : design_(design), norm_(norm), cfg_(cfg) {
  cfg_.validate();
  if (norm_.family != NormFamily::LatentType)
    throw ConfigError("dual ADMM handles latent-type norms only");
  norm_.validate(design_.shape().size());
  if (design_.samples() < 2) throw ConfigError("dual ADMM needs at least two samples");
  modes_ = norm_.modes;
  lambdas_ = norm_.mode_lambdas(cfg_.lambda);

  const auto m = static_cast<Eigen::Index>(design_.samples());
  const auto n = static_cast<Eigen::Index>(design_.features());
  alpha_ = design_.task() == TaskKind::Regression ? Vector::Zero(m) : logistic_initial_alpha(design_.y());
  v_.assign(modes_.size(), Vector::Zero(n));
  w_.assign(modes_.size(), Vector::Zero(n));

  beta_ = cfg_.dual_beta();
  combo_ = combination(alpha_);
  if (design_.task() == TaskKind::Regression)
    ones_solve_ = design_.gram_spectrum().solve_shifted(Vector::Ones(m), static_cast<double>(modes_.size()) * beta_,
                                                        1.0);
}

void DualAdmm::set_state(const Vector& alpha, const std::vector<Vector>& aux,
                         const std::vector<Vector>& latent, double bias) {
  if (alpha.size() != alpha_.size() || aux.size() != v_.size() || latent.size() != w_.size())
    throw ShapeError("state sizes do not match the problem");
  for (std::size_t j = 0; j < v_.size(); ++j)
    if (aux[j].size() != v_[j].size() || latent[j].size() != w_[j].size())
      throw ShapeError("state tensor length does not match the problem");
  alpha_ = alpha;
  combo_ = combination(alpha_);
  v_ = aux;
  w_ = latent;
  bias_ = bias;
  products_valid_ = false;
}

Vector DualAdmm::combination(const Vector& alpha) const { return design_.x().transpose() * alpha; }

// Terms of the Lagrangian that are linear in alpha: X vec(W_bar) - beta X vec(V_bar) + b 1.
Vector DualAdmm::alpha_linear_term() const {
  refresh_products();
  Vector c = xw_ - beta_ * xv_;
  c.array() += bias_;
  return c;
}

void DualAdmm::refresh_products() const {
  if (products_valid_) return;
  const auto n = static_cast<Eigen::Index>(design_.features());
  Matrix sums = Matrix::Zero(n, 2);
  for (std::size_t j = 0; j < w_.size(); ++j) {
    sums.col(0) += w_[j];
    sums.col(1) += v_[j];
  }
  const Matrix products = design_.x() * sums;
  xw_ = products.col(0);
  xv_ = products.col(1);
  products_valid_ = true;
}

double DualAdmm::alpha_lagrangian(const Vector& alpha) const {
  const Vector& y = design_.y();
  const double conj = design_.task() == TaskKind::Regression ? conjugate_squared(as_span(alpha), as_span(y))
                                                             : conjugate_logistic(as_span(alpha), as_span(y));
  const Vector combo = combination(alpha);
  double total = conj;
  for (std::size_t j = 0; j < w_.size(); ++j) {
    const Vector diff = combo - v_[j];
    total += w_[j].dot(diff) + 0.5 * beta_ * diff.squaredNorm();
  }
  const double s = alpha.sum();
  return total + bias_ * s + 0.5 * beta_ * s * s;
}

Vector DualAdmm::alpha_gradient(const Vector& alpha) const {
  const Vector& y = design_.y();
  const double kb = static_cast<double>(modes_.size()) * beta_;
  Vector g = alpha_linear_term() + kb * (design_.gram() * alpha);
  g.array() += beta_ * alpha.sum();
  if (design_.task() == TaskKind::Regression) {
    g += alpha - y;
  } else {
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) += y(i) * log_odds(y(i) * alpha(i));
  }
  return g;
}

Matrix DualAdmm::alpha_hessian(const Vector& alpha) const {
  const Vector& y = design_.y();
  const double kb = static_cast<double>(modes_.size()) * beta_;
  Matrix h = kb * design_.gram();
  h.array() += beta_;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    if (design_.task() == TaskKind::Regression) {
      h(i, i) += 1.0;
    } else {
      const double p = y(i) * alpha(i);
      h(i, i) += 1.0 / (p * (1.0 - p));
    }
  }
  return h;
}

void DualAdmm::update_alpha_regression() {
  if (design_.task() != TaskKind::Regression) throw ConfigError("regression alpha update on classification data");
  // (K beta G + I + beta 1 1^T)^{-1} by Sherman-Morrison on the shared spectrum of G.
  const Vector rhs = design_.y() - alpha_linear_term();
  const Vector base =
      design_.gram_spectrum().solve_shifted(rhs, static_cast<double>(modes_.size()) * beta_, 1.0);
  alpha_ = base - ones_solve_ * (beta_ * base.sum() / (1.0 + beta_ * ones_solve_.sum()));
}

void DualAdmm::update_alpha_logistic() {
  if (design_.task() != TaskKind::Classification)
    throw ConfigError("logistic alpha update on regression data");
  const Vector& y = design_.y();
  const NewtonConfig& nc = cfg_.newton;
  const double kb = static_cast<double>(modes_.size()) * beta_;
  const Vector linear = alpha_linear_term();

  // Lagrangian up to a constant: conj(alpha) + alpha^T c + (K beta / 2) alpha^T G alpha + (beta / 2)(1^T alpha)^2.
  auto value = [&](const Vector& a) {
    const double s = a.sum();
    return conjugate_logistic(as_span(a), as_span(y)) + a.dot(linear) +
           0.5 * kb * a.dot(design_.gram() * a) + 0.5 * beta_ * s * s;
  };
  auto gradient = [&](const Vector& a) {
    Vector g = linear + kb * (design_.gram() * a);
    g.array() += beta_ * a.sum();
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) += y(i) * log_odds(y(i) * a(i));
    return g;
  };

  Vector a = alpha_;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double p = y(i) * a(i);
    if (!(p > 0.0 && p < 1.0)) throw NumericalError("logistic dual iterate left the open box");
  }
  Vector g = gradient(a);
  double f = value(a);
  for (std::size_t it = 0; it < nc.max_iters; ++it) {
    const double gnorm = g.norm();
    if (gnorm <= nc.tol) break;
    Matrix h = kb * design_.gram();
    h.array() += beta_;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      const double p = y(i) * a(i);
      h(i, i) += 1.0 / (p * (1.0 - p));
    }
    Eigen::LLT<Matrix> llt(h);
    if (llt.info() != Eigen::Success) throw NumericalError("Newton Hessian is not positive definite");
    const Vector d = -llt.solve(g);
    ++newton_iterations_;

    double t_max = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double p = y(i) * a(i);
      const double dp = y(i) * d(i);
      if (dp > 0.0) t_max = std::min(t_max, (1.0 - p) / dp);
      if (dp < 0.0) t_max = std::min(t_max, -p / dp);
    }
    double t = std::min(1.0, nc.interior_margin * t_max);
    const double slope = g.dot(d);
    bool accepted = false;
    for (int bt = 0; bt < 80 && t > 0.0; ++bt, t *= nc.backtrack) {
      const Vector trial = a + t * d;
      const double f_trial = value(trial);
      const Vector g_trial = gradient(trial);
      // Armijo on the Lagrangian, or a gradient-norm decrease once values sit
      // at rounding level near the minimizer.
      if (f_trial <= f + nc.armijo * t * slope || g_trial.norm() < (1.0 - nc.armijo * t) * gnorm) {
        a = trial;
        f = f_trial;
        g = g_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw NumericalError("Newton step could not keep the logistic dual interior and decrease the objective");
  }
  alpha_ = a;
}

void DualAdmm::update_alpha() {
  if (design_.task() == TaskKind::Regression)
    update_alpha_regression();
  else
    update_alpha_logistic();
  combo_ = combination(alpha_);
}

void DualAdmm::update_aux(std::size_t j) {
  const Vector arg = w_.at(j) / beta_ + combination(alpha_);
  v_[j] = fold_vec(sv_clip(unfold_vec(arg, design_.shape(), modes_[j]), lambdas_[j]), modes_[j],
                   design_.shape());
  products_valid_ = false;
}

void DualAdmm::update_latent_two_step(std::size_t j) {
  w_.at(j) += beta_ * (combination(alpha_) - v_.at(j));
  products_valid_ = false;
}

void DualAdmm::update_latent_combined(std::size_t j) {
  const Vector arg = w_.at(j) + beta_ * combination(alpha_);
  w_[j] = fold_vec(sv_soft_threshold(unfold_vec(arg, design_.shape(), modes_[j]), beta_ * lambdas_[j]),
                   modes_[j], design_.shape());
  v_[j] = (arg - w_[j]) / beta_;
  products_valid_ = false;
}

void DualAdmm::update_bias() { bias_ += beta_ * alpha_.sum(); }

void DualAdmm::step() {
  update_alpha();
  for (std::size_t j = 0; j < modes_.size(); ++j) {
    const Vector arg = w_[j] + beta_ * combo_;
    w_[j] = fold_vec(sv_soft_threshold(unfold_vec(arg, design_.shape(), modes_[j]), beta_ * lambdas_[j]),
                     modes_[j], design_.shape());
    v_[j] = (arg - w_[j]) / beta_;
  }
  products_valid_ = false;
  update_bias();
}

double DualAdmm::primal_value() const {
  refresh_products();
  Vector scores = xw_;
  scores.array() += bias_;
  double value = empirical_loss(as_span(scores), as_span(design_.y()), design_.task(), SquaredLossScale::Half);
  for (std::size_t j = 0; j < modes_.size(); ++j)
    value += lambdas_[j] * trace_norm(unfold_vec(w_[j], design_.shape(), modes_[j]));
  return value;
}

DualityGap DualAdmm::duality_gap() const {
  return relative_duality_gap(design_, alpha_, modes_, lambdas_, primal_value(), &combo_);
}

Model DualAdmm::model() const {
  Model model;
  model.norm = norm_;
  model.lambda = cfg_.lambda;
  model.task = design_.task();
  model.bias = bias_;
  model.weight = DenseTensor(design_.shape());
  for (const auto& w : w_) {
    model.latent_parts.push_back(DenseTensor::from_vector(design_.shape(), w));
    model.weight += model.latent_parts.back();
  }
  return model;
}

FitResult fit_dual_admm(const Design& design, const NormKind& norm, const SolverConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  DualAdmm solver(design, norm, cfg);
  FitResult result;
  FitReport& report = result.report;

  double best_gap = std::numeric_limits<double>::infinity();
  Model best_model;
  DualityGap best;
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
  if (report.iterations == 0) throw ConfigError("max_outer_iters must be positive");
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
