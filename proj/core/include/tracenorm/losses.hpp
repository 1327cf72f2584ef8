#pragma once

#include <span>

#include "tracenorm/dataset.hpp"
#include "tracenorm/tensor.hpp"

namespace tracenorm {

struct Model;

/// (y - pred)^2
double squared_loss(double pred, double y);
/// log(1 + exp(-y pred)); y must be -1 or +1.
double logistic_loss(double pred, double y);

/// sum_i (alpha_i^2 / 2 - alpha_i y_i)
double conjugate_squared(std::span<const double> alpha, std::span<const double> y);
/// sum_i p_i log p_i + (1 - p_i) log(1 - p_i) with p_i = y_i alpha_i in [0, 1].
double conjugate_logistic(std::span<const double> alpha, std::span<const double> y);

/// Box and balance constraints of the dual: sum_i alpha_i = 0 and, for
/// classification, 0 <= y_i alpha_i <= 1.
bool dual_feasible(std::span<const double> alpha, std::span<const double> y, TaskKind task,
                   double tol = 1e-10);

/// Dual value in maximization form, -D(-alpha): sum_i (alpha_i y_i - alpha_i^2/2)
/// for regression and the summed binary entropy of y_i alpha_i for
/// classification. Throws ConfigError for alpha outside the box.
double dual_objective(std::span<const double> alpha, std::span<const double> y, TaskKind task);

/// Unit uses the squared loss as (y - pred)^2; Half uses (y - pred)^2 / 2,
/// the scaling the solvers optimize.
enum class SquaredLossScale { Unit, Half };

double empirical_loss(std::span<const double> scores, std::span<const double> y, TaskKind task,
                      SquaredLossScale scale);

/// Loss of the model on the data plus its regularizer under model.norm and
/// model.lambda. Latent-type norms read model.latent_parts.
double primal_objective(const Dataset& data, const Model& model,
                        SquaredLossScale scale = SquaredLossScale::Unit);

}  // namespace tracenorm
