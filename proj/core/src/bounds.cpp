#include "tracenorm/bounds.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "parallel.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/linalg.hpp"

namespace tracenorm {

namespace {

double complement_size(const Shape& shape, std::size_t k) {
  double p = 1.0;
  for (std::size_t j = 0; j < shape.size(); ++j)
    if (j != k) p *= static_cast<double>(shape[j]);
  return p;
}

double total_size(const Shape& shape) {
  double p = 1.0;
  for (auto n : shape) p *= static_cast<double>(n);
  return p;
}

BoundReport finish(BoundKind kind, double complexity, const BoundInputs& in) {
  BoundReport r;
  r.kind = kind;
  r.complexity = complexity;
  r.confidence = confidence_term(in.samples, in.delta, in.c2);
  r.value = r.complexity + r.confidence;
  return r;
}

double scale(const BoundInputs& in) { return in.c1 * in.lipschitz * in.radius; }

double log_term(const BoundInputs& in) {
  return in.big_c * std::sqrt(2.0 * std::log(static_cast<double>(in.shape.size())));
}

MonteCarloEstimate summarize(const std::vector<double>& xs) {
  MonteCarloEstimate e;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) e.mean += x;
  e.mean /= n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - e.mean) * (x - e.mean);
    e.standard_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

}  // namespace

void BoundInputs::validate() const {
  validate_shape(shape);
  if (ranks.size() != shape.size()) throw ConfigError("ranks must have one entry per mode");
  for (std::size_t k = 0; k < shape.size(); ++k)
    if (ranks[k] > shape[k]) throw ConfigError("rank exceeds its mode dimension");
  if (samples < 1) throw ConfigError("m must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (!(radius > 0.0) || !(lipschitz > 0.0) || !(c1 > 0.0) || !(c2 > 0.0) || !(big_c > 0.0))
    throw ConfigError("B, Lambda and the constants must be positive");
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Overlapped: return "overlapped";
    case BoundKind::Latent: return "latent";
    case BoundKind::ScaledLatent: return "scaled_latent";
    case BoundKind::ScaledOverlapped: return "scaled_overlapped";
  }
  return "unknown";
}

double confidence_term(std::size_t samples, double delta, double c2) {
  return c2 * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(samples)));
}

BoundReport bound_overlapped(const BoundInputs& in) {
  in.validate();
  double rank_sum = 0.0;
  for (auto r : in.ranks) rank_sum += std::sqrt(static_cast<double>(r));
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t k = 0; k < in.shape.size(); ++k) {
    const double v = std::sqrt(static_cast<double>(in.shape[k])) + std::sqrt(complement_size(in.shape, k));
    if (v < best) best = v, arg = k;
  }
  BoundReport r = finish(BoundKind::Overlapped,
                         scale(in) / std::sqrt(static_cast<double>(in.samples)) * rank_sum * best, in);
  r.dimension_mode = arg;
  return r;
}

BoundReport bound_latent(const BoundInputs& in) {
  in.validate();
  std::size_t rank_arg = 0;
  for (std::size_t k = 1; k < in.ranks.size(); ++k)
    if (in.ranks[k] < in.ranks[rank_arg]) rank_arg = k;
  double worst = -1.0;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < in.shape.size(); ++k) {
    const double v = std::sqrt(static_cast<double>(in.shape[k])) + std::sqrt(complement_size(in.shape, k));
    if (v > worst) worst = v, arg = k;
  }
  const double rank_factor =
      std::sqrt(static_cast<double>(in.ranks[rank_arg]) / static_cast<double>(in.samples));
  BoundReport r = finish(BoundKind::Latent, scale(in) * rank_factor * (worst + log_term(in)), in);
  r.dimension_mode = arg;
  r.rank_mode = rank_arg;
  return r;
}

BoundReport bound_scaled_latent(const BoundInputs& in) {
  in.validate();
  std::size_t rank_arg = 0;
  double ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < in.ranks.size(); ++k) {
    const double v = static_cast<double>(in.ranks[k]) / static_cast<double>(in.shape[k]);
    if (v < ratio) ratio = v, rank_arg = k;
  }
  const double root_n = std::sqrt(total_size(in.shape));
  double worst = -1.0;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < in.shape.size(); ++k) {
    const double v = static_cast<double>(in.shape[k]) + root_n;
    if (v > worst) worst = v, arg = k;
  }
  BoundReport r = finish(BoundKind::ScaledLatent,
                         scale(in) * std::sqrt(ratio / static_cast<double>(in.samples)) * (worst + log_term(in)),
                         in);
  r.dimension_mode = arg;
  r.rank_mode = rank_arg;
  return r;
}

BoundReport bound_scaled_overlapped(const BoundInputs& in) {
  in.validate();
  double rank_sum = 0.0;
  for (std::size_t k = 0; k < in.ranks.size(); ++k)
    rank_sum += std::sqrt(static_cast<double>(in.ranks[k]) / static_cast<double>(in.shape[k]));
  const double root_n = std::sqrt(total_size(in.shape));
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t k = 0; k < in.shape.size(); ++k) {
    const double v = static_cast<double>(in.shape[k]) + root_n;
    if (v < best) best = v, arg = k;
  }
  BoundReport r = finish(BoundKind::ScaledOverlapped,
                         scale(in) / std::sqrt(static_cast<double>(in.samples)) * rank_sum * best, in);
  r.dimension_mode = arg;
  return r;
}

BoundReport evaluate_bound(BoundKind kind, const BoundInputs& in) {
  switch (kind) {
    case BoundKind::Overlapped: return bound_overlapped(in);
    case BoundKind::Latent: return bound_latent(in);
    case BoundKind::ScaledLatent: return bound_scaled_latent(in);
    case BoundKind::ScaledOverlapped: return bound_scaled_overlapped(in);
  }
  throw ConfigError("unknown bound kind");
}

double generic_excess_bound(double dual_norm_mean, double b0, double lipschitz, std::size_t samples,
                            double delta) {
  if (samples < 1) throw ConfigError("m must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  const double m = static_cast<double>(samples);
  return 2.0 / m * lipschitz * b0 * dual_norm_mean + confidence_term(samples, delta);
}

DualNormEstimate estimate_dual_norm_expectation(const Shape& shape, std::size_t samples, std::size_t trials,
                                                std::uint64_t seed, std::size_t threads) {
  validate_shape(shape);
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (samples < 1) throw ConfigError("m must be at least 1");
  DualNormEstimate est;
  est.trials = trials;
  est.overlapped_samples.assign(trials, 0.0);
  est.latent_samples.assign(trials, 0.0);
  est.scaled_samples.assign(trials, 0.0);
  const std::size_t n = element_count(shape);

  detail::parallel_for(trials, threads, [&](std::size_t t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    std::bernoulli_distribution coin;
    std::vector<double> m(n, 0.0);
    for (std::size_t i = 0; i < samples; ++i) {
      const double sigma = coin(rng) ? 1.0 : -1.0;
      for (auto& v : m) v += sigma * normal(rng);
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double scaled = 0.0;
    for (std::size_t k = 0; k < shape.size(); ++k) {
      const double op = spectral_norm(unfold(std::span<const double>(m), shape, k));
      lo = std::min(lo, op);
      hi = std::max(hi, op);
      scaled = std::max(scaled, std::sqrt(static_cast<double>(shape[k])) * op);
    }
    est.overlapped_samples[t] = lo;
    est.latent_samples[t] = hi;
    est.scaled_samples[t] = scaled;
  });

  est.overlapped = summarize(est.overlapped_samples);
  est.latent = summarize(est.latent_samples);
  est.scaled = summarize(est.scaled_samples);
  return est;
}

double latent_dual_norm_expectation_bound(const Shape& shape, std::size_t samples, double big_c) {
  validate_shape(shape);
  const double m = static_cast<double>(samples);
  double worst = 0.0;
  for (std::size_t k = 0; k < shape.size(); ++k)
    worst = std::max(worst, std::sqrt(static_cast<double>(shape[k])) + std::sqrt(complement_size(shape, k)));
  return std::sqrt(m) * worst + big_c * std::sqrt(2.0 * m * std::log(static_cast<double>(shape.size())));
}

std::string bound_csv_header() {
  return "norm,shape,ranks,m,B,Lambda,delta,c1,c2,C,complexity,confidence,total";
}

std::string bound_csv_row(const BoundReport& report, const BoundInputs& in) {
  auto join = [](const auto& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "x" : "") + std::to_string(xs[i]);
    return s;
  };
  std::ostringstream out;
  out.precision(17);
  out << to_string(report.kind) << ',' << join(in.shape) << ',' << join(in.ranks) << ',' << in.samples << ','
      << in.radius << ',' << in.lipschitz << ',' << in.delta << ',' << in.c1 << ',' << in.c2 << ',' << in.big_c
      << ',' << report.complexity << ',' << report.confidence << ',' << report.value;
  return out.str();
}

}  // namespace tracenorm
