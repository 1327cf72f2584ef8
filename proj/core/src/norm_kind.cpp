#include "tracenorm/norm_kind.hpp"

#include <cmath>

#include "tracenorm/error.hpp"

namespace tracenorm {

namespace {

std::vector<std::size_t> all_modes(const Shape& shape) {
  std::vector<std::size_t> modes(shape.size());
  for (std::size_t k = 0; k < shape.size(); ++k) modes[k] = k;
  return modes;
}

std::size_t parse_mode_suffix(const std::string& label, std::size_t prefix, const Shape& shape) {
  const std::string digits = label.substr(prefix);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("bad mode in norm label '" + label + "'");
  const std::size_t k = std::stoul(digits);
  if (k < 1 || k > shape.size())
    throw ConfigError("mode " + digits + " out of range for order " + std::to_string(shape.size()));
  return k - 1;
}

}  // namespace

NormKind NormKind::overlapped(const Shape& shape) {
  return {NormFamily::Overlapped, all_modes(shape), unit_weights(shape)};
}

NormKind NormKind::scaled_overlapped(const Shape& shape) {
  return {NormFamily::Overlapped, all_modes(shape), dimension_scaled_weights(shape)};
}

NormKind NormKind::latent(const Shape& shape) {
  return {NormFamily::LatentType, all_modes(shape), unit_weights(shape)};
}

NormKind NormKind::scaled_latent(const Shape& shape) {
  return {NormFamily::LatentType, all_modes(shape), dimension_scaled_weights(shape)};
}

NormKind NormKind::single_mode(std::size_t mode) { return {NormFamily::LatentType, {mode}, {1.0}}; }

NormKind NormKind::overlapped_mode(std::size_t mode) { return {NormFamily::Overlapped, {mode}, {1.0}}; }

NormKind NormKind::ridge() { return {NormFamily::Ridge, {}, {}}; }

void NormKind::validate(std::size_t order) const {
  if (family == NormFamily::Ridge) return;
  if (modes.empty()) throw ConfigError("norm needs at least one active mode");
  if (weights.size() != modes.size()) throw ConfigError("need one weight per active mode");
  for (std::size_t j = 0; j < modes.size(); ++j) {
    if (modes[j] >= order)
      throw ConfigError("mode " + std::to_string(modes[j] + 1) + " out of range for order " +
                        std::to_string(order));
    for (std::size_t i = 0; i < j; ++i)
      if (modes[i] == modes[j]) throw ConfigError("duplicate mode in norm");
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j]))
      throw ConfigError("mode weights must be positive");
  }
}

std::vector<double> NormKind::mode_lambdas(double lambda) const {
  std::vector<double> out(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) out[j] = lambda * weights[j];
  return out;
}

std::string NormKind::label(const Shape& shape) const {
  if (family == NormFamily::Ridge) return "ridge";
  if (*this == overlapped(shape)) return "overlapped";
  if (*this == scaled_overlapped(shape)) return "scaled_overlapped";
  if (*this == latent(shape)) return "latent";
  if (*this == scaled_latent(shape)) return "scaled_latent";
  if (modes.size() == 1 && weights[0] == 1.0)
    return (family == NormFamily::LatentType ? "mode" : "overlapped_mode") +
           std::to_string(modes[0] + 1);
  return to_string(family) + "_custom";
}

NormKind NormKind::parse(const std::string& label, const Shape& shape) {
  if (label == "ridge") return ridge();
  if (label == "overlapped") return overlapped(shape);
  if (label == "scaled_overlapped") return scaled_overlapped(shape);
  if (label == "latent") return latent(shape);
  if (label == "scaled_latent") return scaled_latent(shape);
  if (label.rfind("overlapped_mode", 0) == 0) return overlapped_mode(parse_mode_suffix(label, 15, shape));
  if (label.rfind("mode", 0) == 0) return single_mode(parse_mode_suffix(label, 4, shape));
  throw ConfigError("unknown norm '" + label + "'");
}

std::string to_string(NormFamily family) {
  switch (family) {
    case NormFamily::Overlapped: return "overlapped";
    case NormFamily::LatentType: return "latent_type";
    case NormFamily::Ridge: return "ridge";
  }
  return "unknown";
}

NormFamily norm_family_from_string(const std::string& name) {
  if (name == "overlapped") return NormFamily::Overlapped;
  if (name == "latent_type") return NormFamily::LatentType;
  if (name == "ridge") return NormFamily::Ridge;
  throw ConfigError("unknown norm family '" + name + "'");
}

}  // namespace tracenorm
