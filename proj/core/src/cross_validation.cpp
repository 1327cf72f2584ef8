#include "tracenorm/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "tracenorm/design.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/model.hpp"

namespace tracenorm {

std::vector<double> additive_lambda_grid(double lo, double hi, double step) {
  if (!(lo > 0.0) || !(hi >= lo) || !(step > 0.0)) throw ConfigError("invalid additive lambda grid");
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    if (v > hi * (1.0 + 1e-12)) break;
    grid.push_back(v);
  }
  return grid;
}

std::vector<double> log_lambda_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi >= lo) || points == 0) throw ConfigError("invalid log lambda grid");
  if (points == 1) return {lo};
  std::vector<double> grid(points);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

void CvSpec::validate() const {
  if (lambdas.empty()) throw ConfigError("lambda grid is empty");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i])) throw ConfigError("lambda grid values must be positive");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw ConfigError("lambda grid must be strictly increasing");
  }
  if (split == SplitMode::KFold && folds < 2) throw ConfigError("k-fold needs at least 2 folds");
}

namespace {

SolverConfig at_lambda(const SolverConfig& cfg, double lambda) {
  SolverConfig c = cfg;
  c.lambda = lambda;
  c.record_trace = false;
  return c;
}

// Lowest metric wins; equal metrics go to the larger lambda (later in the grid).
std::size_t select_best(const std::vector<CvRow>& table) {
  std::size_t best = table.size();
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (std::isnan(table[i].metric)) continue;
    if (best == table.size() || table[i].metric <= table[best].metric) best = i;
  }
  if (best == table.size()) throw NumericalError("every fit in the lambda grid failed");
  return best;
}

}  // namespace

CvResult cross_validate(const Design& train, const Dataset& val, const NormKind& norm, const CvSpec& cv,
                        const SolverConfig& cfg) {
  cv.validate();
  CvResult result;
  std::vector<FitResult> fits(cv.lambdas.size());
  for (std::size_t i = 0; i < cv.lambdas.size(); ++i) {
    CvRow row;
    row.lambda = cv.lambdas[i];
    try {
      fits[i] = fit(train, norm, at_lambda(cfg, row.lambda));
      row.metric = test_metric(fits[i].model, val);
      row.converged = fits[i].report.converged;
      row.iterations = fits[i].report.iterations;
      if (!std::isfinite(row.metric)) row.metric = std::numeric_limits<double>::quiet_NaN();
    } catch (const NumericalError&) {
      row.metric = std::numeric_limits<double>::quiet_NaN();
    }
    result.table.push_back(row);
  }
  const std::size_t best = select_best(result.table);
  result.best_lambda = result.table[best].lambda;
  result.best_metric = result.table[best].metric;
  result.best_fit = std::move(fits[best]);
  return result;
}

CvResult cross_validate(const Dataset& train, const Dataset& val, const NormKind& norm, const CvSpec& cv,
                        const SolverConfig& cfg) {
  cv.validate();
  train.validate();
  if (cv.split == SplitMode::Holdout) {
    val.validate();
    const Design design(train);
    return cross_validate(design, val, norm, cv, cfg);
  }

  const std::size_t m = train.size();
  if (m < cv.folds) throw ConfigError("fewer samples than folds");
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> sums(cv.lambdas.size(), 0.0);
  std::vector<std::size_t> iterations(cv.lambdas.size(), 0);
  std::vector<bool> converged(cv.lambdas.size(), true);
  for (std::size_t f = 0; f < cv.folds; ++f) {
    std::vector<std::size_t> fit_idx;
    std::vector<std::size_t> hold_idx;
    for (std::size_t i = 0; i < m; ++i) (i % cv.folds == f ? hold_idx : fit_idx).push_back(order[i]);
    const Design design(train.subset(fit_idx));
    const Dataset held = train.subset(hold_idx);
    for (std::size_t l = 0; l < cv.lambdas.size(); ++l) {
      try {
        const FitResult r = fit(design, norm, at_lambda(cfg, cv.lambdas[l]));
        sums[l] += test_metric(r.model, held);
        iterations[l] += r.report.iterations;
        converged[l] = converged[l] && r.report.converged;
      } catch (const NumericalError&) {
        sums[l] = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }

  CvResult result;
  for (std::size_t l = 0; l < cv.lambdas.size(); ++l) {
    const double metric = sums[l] / static_cast<double>(cv.folds);
    result.table.push_back({cv.lambdas[l], std::isfinite(metric) ? metric : std::numeric_limits<double>::quiet_NaN(),
                            converged[l], iterations[l]});
  }
  const std::size_t best = select_best(result.table);
  result.best_lambda = result.table[best].lambda;
  result.best_metric = result.table[best].metric;
  const Design full(train);
  result.best_fit = fit(full, norm, at_lambda(cfg, result.best_lambda));
  return result;
}

std::string cv_table_csv(const CvResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "lambda,metric,converged,iterations,selected\n";
  for (const auto& row : result.table)
    out << row.lambda << ',' << row.metric << ',' << (row.converged ? 1 : 0) << ',' << row.iterations << ','
        << (row.lambda == result.best_lambda ? 1 : 0) << '\n';
  return out.str();
}

}  // namespace tracenorm
