#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tracenorm/config.hpp"
#include "tracenorm/dataset.hpp"
#include "tracenorm/norm_kind.hpp"
#include "tracenorm/solvers.hpp"

namespace tracenorm {

/// Additive grid lo, lo + step, ... <= hi (0.01, 0.11, ..., 99.91 by default).
std::vector<double> additive_lambda_grid(double lo = 0.01, double hi = 100.0, double step = 0.1);
/// `points` log-spaced values from lo to hi inclusive.
std::vector<double> log_lambda_grid(double lo = 0.01, double hi = 100.0, std::size_t points = 30);

enum class SplitMode { Holdout, KFold };

struct CvSpec {
  std::vector<double> lambdas = log_lambda_grid();
  SplitMode split = SplitMode::Holdout;
  /// Used by SplitMode::KFold only.
  std::size_t folds = 5;

  void validate() const;
};

struct CvRow {
  double lambda = 0.0;
  /// Validation MSE (regression) or 0-1 error (classification); NaN if the fit failed.
  double metric = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

struct CvResult {
  double best_lambda = 0.0;
  double best_metric = 0.0;
  std::vector<CvRow> table;
  /// Model fitted on the training set at best_lambda (holdout mode only;
  /// k-fold refits on all of train).
  FitResult best_fit;
};

/// Fits one model per grid point and picks the lowest validation metric,
/// breaking ties toward the larger lambda. For k-fold, `val` is ignored and
/// folds are drawn from `train` with cfg.seed. Throws NumericalError if every
/// fit fails.
CvResult cross_validate(const Dataset& train, const Dataset& val, const NormKind& norm,
                        const CvSpec& cv, const SolverConfig& cfg);

/// Same, against prebuilt designs (holdout only).
CvResult cross_validate(const Design& train, const Dataset& val, const NormKind& norm,
                        const CvSpec& cv, const SolverConfig& cfg);

std::string cv_table_csv(const CvResult& result);

}  // namespace tracenorm
