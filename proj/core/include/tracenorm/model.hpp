#pragma once

#include <vector>

#include "tracenorm/dataset.hpp"
#include "tracenorm/norm_kind.hpp"
#include "tracenorm/tensor.hpp"

namespace tracenorm {

struct Model {
  /// W, equal to the sum of latent_parts when those are present.
  DenseTensor weight;
  /// One part per active mode of a latent-type norm; empty otherwise.
  std::vector<DenseTensor> latent_parts;
  double bias = 0.0;
  NormKind norm;
  double lambda = 0.0;
  TaskKind task = TaskKind::Regression;
};

struct Prediction {
  double score = 0.0;
  /// sign(score) for classification (score 0 maps to +1); 0 for regression.
  int label = 0;
  /// 1 / (1 + exp(-score)) for classification; 0 for regression.
  double probability = 0.0;
};

Prediction predict(const Model& model, const DenseTensor& x);
std::vector<double> predict_scores(const Model& model, const Dataset& data);

/// Mean squared error for regression, 0-1 error for classification.
double test_metric(const Model& model, const Dataset& data);

/// sum_k lambda_k ||.||_tr terms (or lambda/2 ||W||^2 for ridge).
double regularizer_value(const Model& model);

}  // namespace tracenorm
