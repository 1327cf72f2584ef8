#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tracenorm/tensor.hpp"

namespace tracenorm {

enum class NormFamily { Overlapped, LatentType, Ridge };

/// Regularizer choice. For Overlapped and LatentType, `modes` lists the
/// active modes (0-based) and `weights` their multipliers, so mode k gets
/// lambda_k = lambda * weight.
struct NormKind {
  NormFamily family = NormFamily::Ridge;
  std::vector<std::size_t> modes;
  std::vector<double> weights;

  static NormKind overlapped(const Shape& shape);
  static NormKind scaled_overlapped(const Shape& shape);
  static NormKind latent(const Shape& shape);
  static NormKind scaled_latent(const Shape& shape);
  /// Matrix trace-norm learning on the mode-k unfolding.
  static NormKind single_mode(std::size_t mode);
  /// Overlapped norm restricted to one mode.
  static NormKind overlapped_mode(std::size_t mode);
  static NormKind ridge();

  /// Throws ConfigError for empty or out-of-range mode sets and non-positive weights.
  void validate(std::size_t order) const;

  std::vector<double> mode_lambdas(double lambda) const;

  /// Short name: overlapped, latent, scaled_latent, mode<k> (1-based), ridge,
  /// or a generic description for custom mode sets.
  std::string label(const Shape& shape) const;

  /// Inverse of label(); also accepts "scaled_overlapped" and "overlapped_mode<k>".
  static NormKind parse(const std::string& label, const Shape& shape);

  bool operator==(const NormKind&) const = default;
};

std::string to_string(NormFamily family);
NormFamily norm_family_from_string(const std::string& name);

}  // namespace tracenorm
