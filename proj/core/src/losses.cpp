#include "tracenorm/losses.hpp"

#include <algorithm>
#include <cmath>

#include "tracenorm/error.hpp"
#include "tracenorm/model.hpp"

namespace tracenorm {

namespace {

void require_label(double y) {
  if (y != 1.0 && y != -1.0) throw ConfigError("classification labels must be -1 or +1");
}

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) throw ShapeError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

constexpr double kBoxSlack = 1e-12;

}  // namespace

double squared_loss(double pred, double y) {
  const double r = y - pred;
  return r * r;
}

double logistic_loss(double pred, double y) {
  require_label(y);
  const double z = y * pred;
  // log(1 + e^{-z}) without overflow for large |z|.
  return z > 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
}

double conjugate_squared(std::span<const double> alpha, std::span<const double> y) {
  require_same_length(alpha.size(), y.size());
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) total += 0.5 * alpha[i] * alpha[i] - alpha[i] * y[i];
  return total;
}

double conjugate_logistic(std::span<const double> alpha, std::span<const double> y) {
  require_same_length(alpha.size(), y.size());
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    require_label(y[i]);
    double p = y[i] * alpha[i];
    if (p < -kBoxSlack || p > 1.0 + kBoxSlack)
      throw ConfigError("dual variable outside 0 <= y alpha <= 1 at index " + std::to_string(i));
    p = std::clamp(p, 0.0, 1.0);
    total += xlogx(p) + xlogx(1.0 - p);
  }
  return total;
}

bool dual_feasible(std::span<const double> alpha, std::span<const double> y, TaskKind task,
                   double tol) {
  require_same_length(alpha.size(), y.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    sum += alpha[i];
    if (task == TaskKind::Classification) {
      const double p = y[i] * alpha[i];
      if (p < -tol || p > 1.0 + tol) return false;
    }
  }
  return std::abs(sum) <= tol * std::max<double>(1.0, static_cast<double>(alpha.size()));
}

double dual_objective(std::span<const double> alpha, std::span<const double> y, TaskKind task) {
  return task == TaskKind::Regression ? -conjugate_squared(alpha, y) : -conjugate_logistic(alpha, y);
}

double empirical_loss(std::span<const double> scores, std::span<const double> y, TaskKind task,
                      SquaredLossScale scale) {
  require_same_length(scores.size(), y.size());
  double total = 0.0;
  if (task == TaskKind::Regression) {
    for (std::size_t i = 0; i < y.size(); ++i) total += squared_loss(scores[i], y[i]);
    if (scale == SquaredLossScale::Half) total *= 0.5;
  } else {
    for (std::size_t i = 0; i < y.size(); ++i) total += logistic_loss(scores[i], y[i]);
  }
  return total;
}

double primal_objective(const Dataset& data, const Model& model, SquaredLossScale scale) {
  data.validate();
  if (data.shape() != model.weight.shape()) throw ShapeError("model and data shapes differ");
  const std::vector<double> scores = predict_scores(model, data);
  return empirical_loss(scores, data.targets, data.task, scale) + regularizer_value(model);
}

}  // namespace tracenorm
