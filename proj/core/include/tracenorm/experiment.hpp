#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tracenorm/config.hpp"
#include "tracenorm/cross_validation.hpp"
#include "tracenorm/toy_data.hpp"

namespace tracenorm {

/// Method names: overlapped, latent, scaled_latent, mode1..modeK, modewise_cv, ridge.
/// modewise_cv selects the (mode, lambda) pair with the best validation MSE
/// among the single-mode fits.
struct ExperimentConfig {
  std::vector<ToySetup> setups = {ToySetup::A, ToySetup::B, ToySetup::C};
  std::vector<std::string> methods = {"overlapped", "latent", "scaled_latent", "mode1",
                                      "mode2",      "mode3",  "modewise_cv",  "ridge"};
  std::vector<std::size_t> train_sizes = {200, 400, 800};
  std::size_t replicates = 10;
  std::size_t m_val = 200;
  std::size_t m_test = 500;
  double noise_std = 0.31622776601683794;
  CvSpec cv;
  /// The study fits hundreds of lambdas per cell, so its default penalty
  /// follows lambda (BetaRule::LambdaScaled); single fits default to Fixed.
  SolverConfig solver = [] {
    SolverConfig s;
    s.beta_rule = BetaRule::LambdaScaled;
    return s;
  }();
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  void validate() const;
};

/// Parses the JSON config schema documented in the README; unknown keys are
/// rejected with ConfigError, as are values that fail validate().
ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& config);

struct ExperimentRow {
  std::string setup;
  std::string method;
  std::size_t m_train = 0;
  std::size_t replicate = 0;
  double test_mse = 0.0;
  double val_mse = 0.0;
  double lambda = 0.0;
  /// Mode chosen by modewise_cv (1-based); 0 otherwise.
  std::size_t selected_mode = 0;
  bool ok = true;
  std::string error;
  double fit_seconds = 0.0;
};

struct AggregateRow {
  std::string setup;
  std::string method;
  std::size_t m_train = 0;
  std::size_t count = 0;
  double mean_mse = 0.0;
  double std_mse = 0.0;
  double mean_seconds = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<AggregateRow> aggregate;

  const AggregateRow* find(const std::string& setup, const std::string& method,
                           std::size_t m_train) const;
};

/// Runs gen -> CV -> test for every (setup, m_train, replicate) cell. Each
/// cell draws from an RNG stream derived from (seed, setup, m_train,
/// replicate); cells run on `threads` workers and results are ordered by
/// cell, so the output does not depend on the thread count.
ExperimentResult run_regression_experiment(const ExperimentConfig& config);

std::vector<AggregateRow> aggregate_rows(const std::vector<ExperimentRow>& rows);

/// Tidy and aggregate CSVs carry no wall-clock data and are reproducible
/// byte for byte; timings go to the separate timing CSV.
std::string tidy_csv(const ExperimentResult& result);
std::string aggregate_csv(const ExperimentResult& result);
std::string timing_csv(const ExperimentResult& result);
std::string gnuplot_script(const ExperimentResult& result);

/// Writes tidy.csv, aggregate.csv, timing.csv and plot.gp into dir.
void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentResult& result);

/// Parses tidy.csv content back into rows (timing fields are zero).
std::vector<ExperimentRow> parse_tidy_csv(const std::string& text);

}  // namespace tracenorm
