#include "tracenorm/toy_data.hpp"

#include <random>

#include "tracenorm/error.hpp"

namespace tracenorm {

std::string to_string(ToySetup setup) {
  switch (setup) {
    case ToySetup::A: return "A";
    case ToySetup::B: return "B";
    case ToySetup::C: return "C";
  }
  return "?";
}

ToySetup toy_setup_from_string(const std::string& name) {
  if (name == "A" || name == "a") return ToySetup::A;
  if (name == "B" || name == "b") return ToySetup::B;
  if (name == "C" || name == "c") return ToySetup::C;
  throw ConfigError("unknown setup '" + name + "' (expected A, B or C)");
}

TuckerSpec toy_setup_spec(ToySetup setup) {
  switch (setup) {
    case ToySetup::A: return {{10, 10, 10}, {3, 3, 3}};
    case ToySetup::B: return {{10, 10, 10}, {3, 5, 8}};
    case ToySetup::C: return {{4, 10, 10}, {3, 4, 8}};
  }
  throw ConfigError("unknown setup");
}

void ToyRegressionSpec::validate() const {
  if (m_train == 0 || m_val == 0 || m_test == 0) throw ConfigError("sample counts must be positive");
  if (!(noise_std >= 0.0)) throw ConfigError("noise_std must be non-negative");
}

namespace {

Dataset draw(const DenseTensor& w, std::size_t m, double noise_std, std::mt19937_64& rng,
             const std::string& provenance) {
  std::normal_distribution<double> normal;
  Dataset data;
  data.task = TaskKind::Regression;
  data.provenance = provenance;
  data.covariates.reserve(m);
  data.targets.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    DenseTensor x = gaussian_tensor(w.shape(), rng);
    const double y = inner(w, x) + noise_std * normal(rng);
    data.covariates.push_back(std::move(x));
    data.targets.push_back(y);
  }
  return data;
}

}  // namespace

ToyData gen_toy_regression(const ToyRegressionSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  ToyData out;
  out.true_weight = tucker_random(toy_setup_spec(spec.setup), rng);
  const std::string base = "toy setup " + to_string(spec.setup) + " seed " + std::to_string(spec.seed);
  out.train = draw(out.true_weight, spec.m_train, spec.noise_std, rng, base + " train");
  out.val = draw(out.true_weight, spec.m_val, spec.noise_std, rng, base + " val");
  out.test = draw(out.true_weight, spec.m_test, spec.noise_std, rng, base + " test");
  return out;
}

}  // namespace tracenorm
