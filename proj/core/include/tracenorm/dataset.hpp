#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tracenorm/tensor.hpp"

namespace tracenorm {

enum class TaskKind { Regression, Classification };

std::string to_string(TaskKind task);
TaskKind task_from_string(const std::string& name);

/// Covariate tensors with a common shape, their targets and the task kind.
struct Dataset {
  std::vector<DenseTensor> covariates;
  std::vector<double> targets;
  TaskKind task = TaskKind::Regression;
  /// Free-form origin note (generator parameters or source path).
  std::string provenance;

  std::size_t size() const noexcept { return targets.size(); }
  const Shape& shape() const;

  /// Throws ShapeError/ConfigError when lengths, shapes or labels disagree.
  void validate() const;

  Dataset subset(const std::vector<std::size_t>& indices) const;
};

}  // namespace tracenorm
