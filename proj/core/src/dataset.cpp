#include "tracenorm/dataset.hpp"

#include "tracenorm/error.hpp"

namespace tracenorm {

std::string to_string(TaskKind task) {
  return task == TaskKind::Regression ? "regression" : "classification";
}

TaskKind task_from_string(const std::string& name) {
  if (name == "regression") return TaskKind::Regression;
  if (name == "classification") return TaskKind::Classification;
  throw ConfigError("unknown task kind '" + name + "'");
}

const Shape& Dataset::shape() const {
  if (covariates.empty()) throw ShapeError("empty dataset has no shape");
  return covariates.front().shape();
}

void Dataset::validate() const {
  if (covariates.size() != targets.size())
    throw ShapeError(std::to_string(covariates.size()) + " covariates but " +
                     std::to_string(targets.size()) + " targets");
  if (covariates.empty()) throw ShapeError("dataset is empty");
  const Shape& s = covariates.front().shape();
  validate_shape(s);
  for (const auto& x : covariates)
    if (x.shape() != s) throw ShapeError("covariates do not share a common shape");
  if (task == TaskKind::Classification)
    for (double y : targets)
      if (y != 1.0 && y != -1.0) throw ConfigError("classification targets must be -1 or +1");
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.task = task;
  out.provenance = provenance;
  out.covariates.reserve(indices.size());
  out.targets.reserve(indices.size());
  for (auto i : indices) {
    out.covariates.push_back(covariates.at(i));
    out.targets.push_back(targets.at(i));
  }
  return out;
}

}  // namespace tracenorm
