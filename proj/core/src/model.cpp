#include "tracenorm/model.hpp"

#include <cmath>

#include "tracenorm/error.hpp"
#include "tracenorm/linalg.hpp"
#include "tracenorm/losses.hpp"

namespace tracenorm {

Prediction predict(const Model& model, const DenseTensor& x) {
  if (x.shape() != model.weight.shape())
    throw ShapeError("covariate shape " + shape_to_string(x.shape()) + " does not match model " +
                     shape_to_string(model.weight.shape()));
  Prediction p;
  p.score = inner(model.weight, x) + model.bias;
  if (model.task == TaskKind::Classification) {
    p.label = p.score >= 0.0 ? 1 : -1;
    p.probability = 1.0 / (1.0 + std::exp(-p.score));
  }
  return p;
}

std::vector<double> predict_scores(const Model& model, const Dataset& data) {
  std::vector<double> scores;
  scores.reserve(data.size());
  for (const auto& x : data.covariates) scores.push_back(predict(model, x).score);
  return scores;
}

double test_metric(const Model& model, const Dataset& data) {
  data.validate();
  const std::vector<double> scores = predict_scores(model, data);
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (data.task == TaskKind::Regression)
      total += squared_loss(scores[i], data.targets[i]);
    else
      total += ((scores[i] >= 0.0 ? 1.0 : -1.0) != data.targets[i]) ? 1.0 : 0.0;
  }
  return total / static_cast<double>(scores.size());
}

double regularizer_value(const Model& model) {
  const NormKind& norm = model.norm;
  const std::vector<double> lambdas = norm.mode_lambdas(model.lambda);
  switch (norm.family) {
    case NormFamily::Ridge: {
      const double f = frobenius(model.weight);
      return 0.5 * model.lambda * f * f;
    }
    case NormFamily::Overlapped: {
      double total = 0.0;
      for (std::size_t j = 0; j < norm.modes.size(); ++j)
        total += lambdas[j] * trace_norm(unfold(model.weight, norm.modes[j]));
      return total;
    }
    case NormFamily::LatentType: {
      if (model.latent_parts.size() != norm.modes.size())
        throw ShapeError("latent-type model needs one latent part per active mode");
      double total = 0.0;
      for (std::size_t j = 0; j < norm.modes.size(); ++j)
        total += lambdas[j] * trace_norm(unfold(model.latent_parts[j], norm.modes[j]));
      return total;
    }
  }
  return 0.0;
}

}  // namespace tracenorm
