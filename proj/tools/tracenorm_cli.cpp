// tracenorm command-line tool.
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tracenorm/bounds.hpp"
#include "tracenorm/cross_validation.hpp"
#include "tracenorm/dataset_io.hpp"
#include "tracenorm/design.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/experiment.hpp"
#include "tracenorm/features.hpp"
#include "tracenorm/model.hpp"
#include "tracenorm/model_io.hpp"
#include "tracenorm/solvers.hpp"
#include "tracenorm/tensor_io.hpp"
#include "tracenorm/toy_data.hpp"

namespace fs = std::filesystem;
using namespace tracenorm;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Globals {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string config;
  std::string out = ".";
  std::size_t threads = 1;
  bool threads_set = false;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

// The --config file uses the experiment schema; fit and cv read its solver
// and cv sections. Command-line flags override it. Without a config file,
// fit and cv use the plain solver defaults (fixed beta).
ExperimentConfig load_config(const Globals& g, bool single_fit) {
  ExperimentConfig c = g.config.empty() ? ExperimentConfig{} : experiment_config_from_json(read_text(g.config));
  if (single_fit && g.config.empty()) c.solver = SolverConfig{};
  if (g.seed_set) c.seed = g.seed;
  if (g.threads_set) c.threads = g.threads;
  c.solver.seed = c.seed;
  return c;
}

Shape parse_dims(const std::string& text, const char* what) {
  Shape out;
  std::stringstream s(text);
  std::string part;
  while (std::getline(s, part, ',')) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(part, &pos);
      if (pos != part.size()) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad ") + what + " list '" + text + "'");
    }
  }
  if (out.empty()) throw ConfigError(std::string("empty ") + what + " list");
  return out;
}

struct SolverFlags {
  std::optional<double> lambda;
  std::optional<double> beta;
  std::optional<double> tol;
  std::optional<std::size_t> max_iters;
  std::string beta_rule;
  std::string norm = "latent";

  void add(CLI::App* app) {
    app->add_option("--norm", norm,
                    "overlapped, scaled_overlapped, latent, scaled_latent, mode<k>, overlapped_mode<k>, ridge");
    app->add_option("--beta", beta, "ADMM penalty parameter");
    app->add_option("--beta-rule", beta_rule, "fixed or lambda_scaled");
    app->add_option("--tol", tol, "relative duality gap tolerance");
    app->add_option("--max-iters", max_iters, "maximum outer ADMM iterations");
  }

  void apply(SolverConfig& cfg) const {
    if (lambda) cfg.lambda = *lambda;
    if (beta) cfg.beta = *beta;
    if (tol) cfg.tol = *tol;
    if (max_iters) cfg.max_outer_iters = *max_iters;
    if (!beta_rule.empty()) cfg.beta_rule = beta_rule_from_string(beta_rule);
  }
};

int run_gen(const Globals& g, const std::string& setup, std::size_t m_train, std::size_t m_val, std::size_t m_test,
            double noise_std) {
  ToyRegressionSpec spec;
  spec.setup = toy_setup_from_string(setup);
  spec.m_train = m_train;
  spec.m_val = m_val;
  spec.m_test = m_test;
  spec.noise_std = noise_std;
  spec.seed = g.seed;
  const ToyData data = gen_toy_regression(spec);
  const fs::path out(g.out);
  write_dataset(out / "train", data.train);
  write_dataset(out / "val", data.val);
  write_dataset(out / "test", data.test);
  save_tensor(out / "true_weight.tnsr", data.true_weight);
  std::cout << "wrote train/val/test datasets and true_weight.tnsr to " << out.string() << '\n';
  return 0;
}

int run_fit(const Globals& g, const SolverFlags& flags, const std::string& data_dir, const std::string& test_dir) {
  ExperimentConfig c = load_config(g, true);
  flags.apply(c.solver);
  const Dataset data = read_dataset(data_dir);
  const Design design(data);
  const NormKind norm = NormKind::parse(flags.norm, data.shape());
  const FitResult result = fit(design, norm, c.solver);
  const fs::path out(g.out);
  fs::create_directories(out);
  save_model(out / "model.tnmd", result.model);
  write_text(out / "report.json", fit_report_json(result.report) + "\n");
  std::cout << "norm " << norm.label(data.shape()) << " lambda " << c.solver.lambda << ": "
            << result.report.message << " after " << result.report.iterations << " iterations, gap "
            << result.report.final_gap << '\n';
  if (!test_dir.empty()) std::cout << "test metric " << test_metric(result.model, read_dataset(test_dir)) << '\n';
  return 0;
}

int run_cv(const Globals& g, const SolverFlags& flags, const std::string& train_dir, const std::string& val_dir,
           bool full_grid, std::size_t kfold) {
  ExperimentConfig c = load_config(g, true);
  flags.apply(c.solver);
  if (full_grid) c.cv.lambdas = additive_lambda_grid();
  if (kfold > 0) {
    c.cv.split = SplitMode::KFold;
    c.cv.folds = kfold;
  }
  const Dataset train = read_dataset(train_dir);
  Dataset val;
  if (c.cv.split == SplitMode::Holdout) {
    if (val_dir.empty()) throw ConfigError("holdout cross-validation needs --val");
    val = read_dataset(val_dir);
  }
  const NormKind norm = NormKind::parse(flags.norm, train.shape());
  const CvResult result = cross_validate(train, val, norm, c.cv, c.solver);
  const fs::path out(g.out);
  write_text(out / "cv.csv", cv_table_csv(result));
  save_model(out / "model.tnmd", result.best_fit.model);
  std::cout << "best lambda " << result.best_lambda << " metric " << result.best_metric << '\n';
  return 0;
}

int run_experiment(const Globals& g, const std::vector<std::string>& setups, std::size_t replicates,
                   const std::vector<std::size_t>& sizes, const std::vector<std::string>& methods, bool full_grid) {
  ExperimentConfig c = load_config(g, false);
  if (!setups.empty()) {
    c.setups.clear();
    for (const auto& s : setups) c.setups.push_back(toy_setup_from_string(s));
  }
  if (replicates > 0) c.replicates = replicates;
  if (!sizes.empty()) c.train_sizes = sizes;
  if (!methods.empty()) c.methods = methods;
  if (full_grid) c.cv.lambdas = additive_lambda_grid();
  const ExperimentResult result = run_regression_experiment(c);
  write_experiment_outputs(g.out, result);
  write_text(fs::path(g.out) / "config.json", experiment_config_to_json(c) + "\n");
  std::cout << aggregate_csv(result);
  return 0;
}

int run_bounds(const Globals& g, BoundInputs in, const std::string& shape, const std::string& ranks,
               const std::string& kind) {
  in.shape = parse_dims(shape, "shape");
  in.ranks = parse_dims(ranks, "rank");
  in.validate();
  std::vector<BoundKind> kinds;
  if (kind == "all")
    kinds = {BoundKind::Overlapped, BoundKind::ScaledOverlapped, BoundKind::Latent, BoundKind::ScaledLatent};
  else if (kind == "overlapped")
    kinds = {BoundKind::Overlapped};
  else if (kind == "scaled_overlapped")
    kinds = {BoundKind::ScaledOverlapped};
  else if (kind == "latent")
    kinds = {BoundKind::Latent};
  else if (kind == "scaled_latent")
    kinds = {BoundKind::ScaledLatent};
  else
    throw ConfigError("unknown bound kind '" + kind + "'");
  std::string csv = bound_csv_header() + "\n";
  for (auto k : kinds) csv += bound_csv_row(evaluate_bound(k, in), in) + "\n";
  write_text(fs::path(g.out) / "bounds.csv", csv);
  std::cout << csv;
  return 0;
}

int run_dualnorm(const Globals& g, const std::string& shape_text, std::size_t m, std::size_t trials, double big_c) {
  const Shape shape = parse_dims(shape_text, "shape");
  const DualNormEstimate est = estimate_dual_norm_expectation(shape, m, trials, g.seed, g.threads);
  std::ostringstream csv;
  csv.precision(17);
  csv << "surrogate,mean,stderr,trials\n";
  csv << "overlapped_upper," << est.overlapped.mean << ',' << est.overlapped.standard_error << ',' << trials << '\n';
  csv << "latent," << est.latent.mean << ',' << est.latent.standard_error << ',' << trials << '\n';
  csv << "scaled_latent," << est.scaled.mean << ',' << est.scaled.standard_error << ',' << trials << '\n';
  csv << "latent_expectation_bound," << latent_dual_norm_expectation_bound(shape, m, big_c) << ",0," << trials
      << '\n';
  write_text(fs::path(g.out) / "dualnorm.csv", csv.str());
  std::cout << csv.str();
  return 0;
}

// Input is an order-2 C x T signal or an order-3 Z x C x T stack of signals.
int run_features(const Globals& g, const std::string& input) {
  const DenseTensor t = load_tensor(input);
  std::vector<Matrix> mats;
  if (t.order() == 2) {
    mats.push_back(covariance_features(unfold(t, 0)));
  } else if (t.order() == 3) {
    const std::size_t z = t.dim(0);
    const std::size_t c = t.dim(1);
    const std::size_t time = t.dim(2);
    for (std::size_t s = 0; s < z; ++s) {
      Matrix signal(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(time));
      for (std::size_t j = 0; j < time; ++j)
        for (std::size_t i = 0; i < c; ++i)
          signal(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t[s + z * (i + c * j)];
      mats.push_back(covariance_features(signal));
    }
  } else {
    throw ShapeError("features input must have order 2 (C x T) or 3 (Z x C x T)");
  }
  const DenseTensor out = stack_feature_tensor(mats);
  const fs::path path = fs::path(g.out) / "features.tnsr";
  fs::create_directories(g.out);
  save_tensor(path, out);
  std::cout << "wrote " << shape_to_string(out.shape()) << " feature tensor to " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor regression and classification with overlapped and latent trace norms"};
  app.require_subcommand(1);
  Globals g;
  app.add_option_function<std::uint64_t>(
         "--seed", [&](std::uint64_t s) { g.seed = s, g.seed_set = true; }, "master random seed (default 0)");
  app.add_option("--config", g.config, "JSON config file (see README)");
  app.add_option("--out", g.out, "output directory")->default_val(".");
  app.add_option_function<std::size_t>(
         "--threads", [&](std::size_t t) { g.threads = t, g.threads_set = true; }, "worker threads (default 1)")
      ->check(CLI::PositiveNumber);

  std::string setup = "A";
  std::size_t m_train = 200, m_val = 200, m_test = 500;
  double noise_std = 0.31622776601683794;
  auto* gen = app.add_subcommand("gen", "write synthetic train/val/test datasets");
  gen->add_option("--setup", setup, "A, B or C");
  gen->add_option("--m-train", m_train);
  gen->add_option("--m-val", m_val);
  gen->add_option("--m-test", m_test);
  gen->add_option("--noise-std", noise_std);

  SolverFlags fit_flags;
  std::string data_dir, test_dir;
  auto* fit_cmd = app.add_subcommand("fit", "fit one model at a fixed lambda");
  fit_cmd->add_option("--data", data_dir, "dataset directory")->required();
  fit_cmd->add_option("--test", test_dir, "optional dataset to report the test metric on");
  fit_cmd->add_option("--lambda", fit_flags.lambda, "regularization constant");
  fit_flags.add(fit_cmd);

  SolverFlags cv_flags;
  std::string train_dir, val_dir;
  bool cv_full_grid = false;
  std::size_t kfold = 0;
  auto* cv_cmd = app.add_subcommand("cv", "select lambda on a validation set or by k-fold");
  cv_cmd->add_option("--train", train_dir, "training dataset directory")->required();
  cv_cmd->add_option("--val", val_dir, "validation dataset directory (holdout)");
  cv_cmd->add_option("--kfold", kfold, "use k-fold splitting of the training set");
  cv_cmd->add_flag("--full-grid", cv_full_grid, "additive grid 0.01:0.1:100 instead of the log grid");
  cv_flags.add(cv_cmd);

  std::vector<std::string> setups, methods;
  std::vector<std::size_t> sizes;
  std::size_t replicates = 0;
  bool exp_full_grid = false;
  auto* exp_cmd = app.add_subcommand("experiment", "run the synthetic regression study");
  exp_cmd->add_option("--setups", setups, "subset of A B C")->delimiter(',');
  exp_cmd->add_option("--methods", methods)->delimiter(',');
  exp_cmd->add_option("--train-sizes", sizes)->delimiter(',');
  exp_cmd->add_option("--replicates", replicates);
  exp_cmd->add_flag("--full-grid", exp_full_grid, "additive grid 0.01:0.1:100 instead of the log grid");

  BoundInputs bound_in;
  std::string shape = "10,10,10", ranks = "3,3,3", kind = "all";
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate excess-risk bounds");
  bounds_cmd->add_option("--shape", shape, "comma-separated mode dimensions");
  bounds_cmd->add_option("--ranks", ranks, "comma-separated multilinear ranks");
  bounds_cmd->add_option("--m", bound_in.samples, "sample count");
  bounds_cmd->add_option("--B", bound_in.radius, "Frobenius radius of the true weight");
  bounds_cmd->add_option("--Lambda", bound_in.lipschitz, "Lipschitz constant of the loss");
  bounds_cmd->add_option("--delta", bound_in.delta, "failure probability");
  bounds_cmd->add_option("--c1", bound_in.c1);
  bounds_cmd->add_option("--c2", bound_in.c2);
  bounds_cmd->add_option("--C", bound_in.big_c);
  bounds_cmd->add_option("--kind", kind, "all, overlapped, scaled_overlapped, latent, scaled_latent");

  std::string dn_shape = "4,10,10";
  std::size_t dn_m = 50, dn_trials = 200;
  double dn_c = 1.0;
  auto* dual_cmd = app.add_subcommand("dualnorm", "Monte-Carlo estimate of dual-norm expectations");
  dual_cmd->add_option("--shape", dn_shape);
  dual_cmd->add_option("--m", dn_m);
  dual_cmd->add_option("--trials", dn_trials);
  dual_cmd->add_option("--C", dn_c, "constant of the expectation bound");

  std::string feature_input;
  auto* feat_cmd = app.add_subcommand("features", "covariance features of C x T signals stored as a TNSR file");
  feat_cmd->add_option("--input", feature_input, "order-2 or order-3 TNSR file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) return run_gen(g, setup, m_train, m_val, m_test, noise_std);
    if (*fit_cmd) return run_fit(g, fit_flags, data_dir, test_dir);
    if (*cv_cmd) return run_cv(g, cv_flags, train_dir, val_dir, cv_full_grid, kfold);
    if (*exp_cmd) return run_experiment(g, setups, replicates, sizes, methods, exp_full_grid);
    if (*bounds_cmd) return run_bounds(g, bound_in, shape, ranks, kind);
    if (*dual_cmd) return run_dualnorm(g, dn_shape, dn_m, dn_trials, dn_c);
    if (*feat_cmd) return run_features(g, feature_input);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
