#include "tracenorm/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "parallel.hpp"
#include "tracenorm/design.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/model.hpp"

namespace tracenorm {

namespace {

using nlohmann::json;

bool is_mode_method(const std::string& name, std::size_t order) {
  if (name.size() < 5 || name.rfind("mode", 0) != 0) return false;
  try {
    std::size_t pos = 0;
    const int k = std::stoi(name.substr(4), &pos);
    return pos == name.size() - 4 && k >= 1 && static_cast<std::size_t>(k) <= order;
  } catch (const std::exception&) {
    return false;
  }
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
T get(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

void read_newton(const json& j, NewtonConfig& n) {
  check_keys(j, {"max_iters", "backtrack", "armijo", "interior_margin", "tol"}, "solver.newton");
  if (j.contains("max_iters")) n.max_iters = get<std::size_t>(j, "max_iters", "solver.newton");
  if (j.contains("backtrack")) n.backtrack = get<double>(j, "backtrack", "solver.newton");
  if (j.contains("armijo")) n.armijo = get<double>(j, "armijo", "solver.newton");
  if (j.contains("interior_margin")) n.interior_margin = get<double>(j, "interior_margin", "solver.newton");
  if (j.contains("tol")) n.tol = get<double>(j, "tol", "solver.newton");
}

void read_solver(const json& j, SolverConfig& s) {
  check_keys(j, {"lambda", "beta", "beta_rule", "tol", "max_outer_iters", "newton"}, "solver");
  if (j.contains("lambda")) s.lambda = get<double>(j, "lambda", "solver");
  if (j.contains("beta")) s.beta = get<double>(j, "beta", "solver");
  if (j.contains("beta_rule")) s.beta_rule = beta_rule_from_string(get<std::string>(j, "beta_rule", "solver"));
  if (j.contains("tol")) s.tol = get<double>(j, "tol", "solver");
  if (j.contains("max_outer_iters")) s.max_outer_iters = get<std::size_t>(j, "max_outer_iters", "solver");
  if (j.contains("newton")) read_newton(j["newton"], s.newton);
}

void read_cv(const json& j, CvSpec& cv) {
  check_keys(j, {"grid", "lo", "hi", "points", "step", "lambdas", "split", "folds"}, "cv");
  const std::string grid = j.contains("grid") ? get<std::string>(j, "grid", "cv") : "log";
  const double lo = j.contains("lo") ? get<double>(j, "lo", "cv") : 0.01;
  const double hi = j.contains("hi") ? get<double>(j, "hi", "cv") : 100.0;
  if (j.contains("lambdas")) {
    cv.lambdas = get<std::vector<double>>(j, "lambdas", "cv");
  } else if (grid == "log") {
    cv.lambdas = log_lambda_grid(lo, hi, j.contains("points") ? get<std::size_t>(j, "points", "cv") : 30);
  } else if (grid == "additive") {
    cv.lambdas = additive_lambda_grid(lo, hi, j.contains("step") ? get<double>(j, "step", "cv") : 0.1);
  } else {
    throw ConfigError("cv.grid must be 'log' or 'additive'");
  }
  if (j.contains("split")) {
    const auto split = get<std::string>(j, "split", "cv");
    if (split == "holdout")
      cv.split = SplitMode::Holdout;
    else if (split == "kfold")
      cv.split = SplitMode::KFold;
    else
      throw ConfigError("cv.split must be 'holdout' or 'kfold'");
  }
  if (j.contains("folds")) cv.folds = get<std::size_t>(j, "folds", "cv");
}

std::uint64_t cell_seed(std::uint64_t master, std::size_t setup, std::size_t m, std::size_t replicate) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(setup), static_cast<std::uint32_t>(m),
                    static_cast<std::uint32_t>(replicate)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

std::string csv_escape(const std::string& text) {
  std::string out;
  for (char c : text) out += (c == ',' || c == '\n' || c == '"') ? ' ' : c;
  return out;
}

struct MethodOutcome {
  CvResult cv;
  double seconds = 0.0;
};

}  // namespace

void ExperimentConfig::validate() const {
  if (setups.empty()) throw ConfigError("no setups configured");
  if (methods.empty()) throw ConfigError("no methods configured");
  if (train_sizes.empty()) throw ConfigError("no training sizes configured");
  if (replicates == 0) throw ConfigError("replicates must be positive");
  if (m_val == 0 || m_test == 0) throw ConfigError("m_val and m_test must be positive");
  if (!(noise_std >= 0.0)) throw ConfigError("noise_std must be non-negative");
  if (threads == 0) throw ConfigError("threads must be positive");
  for (auto m : train_sizes)
    if (m < 2) throw ConfigError("training sizes must be at least 2");
  for (const auto& method : methods) {
    if (method == "overlapped" || method == "latent" || method == "scaled_latent" || method == "scaled_overlapped" ||
        method == "modewise_cv" || method == "ridge")
      continue;
    for (auto setup : setups)
      if (!is_mode_method(method, toy_setup_spec(setup).shape.size()))
        throw ConfigError("unknown method '" + method + "'");
  }
  cv.validate();
  SolverConfig s = solver;
  s.validate();
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j,
             {"setups", "methods", "train_sizes", "replicates", "m_val", "m_test", "noise_std", "cv", "solver", "seed",
              "threads"},
             "config");
  ExperimentConfig c;
  if (j.contains("setups")) {
    c.setups.clear();
    for (const auto& s : get<std::vector<std::string>>(j, "setups", "config"))
      c.setups.push_back(toy_setup_from_string(s));
  }
  if (j.contains("methods")) c.methods = get<std::vector<std::string>>(j, "methods", "config");
  if (j.contains("train_sizes")) c.train_sizes = get<std::vector<std::size_t>>(j, "train_sizes", "config");
  if (j.contains("replicates")) c.replicates = get<std::size_t>(j, "replicates", "config");
  if (j.contains("m_val")) c.m_val = get<std::size_t>(j, "m_val", "config");
  if (j.contains("m_test")) c.m_test = get<std::size_t>(j, "m_test", "config");
  if (j.contains("noise_std")) c.noise_std = get<double>(j, "noise_std", "config");
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed", "config");
  if (j.contains("threads")) c.threads = get<std::size_t>(j, "threads", "config");
  if (j.contains("cv")) read_cv(j["cv"], c.cv);
  if (j.contains("solver")) read_solver(j["solver"], c.solver);
  c.validate();
  return c;
}

std::string experiment_config_to_json(const ExperimentConfig& c) {
  json j;
  std::vector<std::string> setups;
  for (auto s : c.setups) setups.push_back(to_string(s));
  j["setups"] = setups;
  j["methods"] = c.methods;
  j["train_sizes"] = c.train_sizes;
  j["replicates"] = c.replicates;
  j["m_val"] = c.m_val;
  j["m_test"] = c.m_test;
  j["noise_std"] = c.noise_std;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["cv"] = {{"lambdas", c.cv.lambdas},
             {"split", c.cv.split == SplitMode::Holdout ? "holdout" : "kfold"},
             {"folds", c.cv.folds}};
  j["solver"] = {{"lambda", c.solver.lambda},
                 {"beta", c.solver.beta},
                 {"beta_rule", to_string(c.solver.beta_rule)},
                 {"tol", c.solver.tol},
                 {"max_outer_iters", c.solver.max_outer_iters},
                 {"newton",
                  {{"max_iters", c.solver.newton.max_iters},
                   {"backtrack", c.solver.newton.backtrack},
                   {"armijo", c.solver.newton.armijo},
                   {"interior_margin", c.solver.newton.interior_margin},
                   {"tol", c.solver.newton.tol}}}};
  return j.dump(2);
}

const AggregateRow* ExperimentResult::find(const std::string& setup, const std::string& method,
                                           std::size_t m_train) const {
  for (const auto& row : aggregate)
    if (row.setup == setup && row.method == method && row.m_train == m_train) return &row;
  return nullptr;
}

ExperimentResult run_regression_experiment(const ExperimentConfig& config) {
  config.validate();
  struct Cell {
    std::size_t setup_index;
    ToySetup setup;
    std::size_t m_train;
    std::size_t replicate;
  };
  std::vector<Cell> cells;
  for (std::size_t s = 0; s < config.setups.size(); ++s)
    for (auto m : config.train_sizes)
      for (std::size_t r = 0; r < config.replicates; ++r) cells.push_back({s, config.setups[s], m, r});

  std::vector<std::vector<ExperimentRow>> per_cell(cells.size());
  detail::parallel_for(cells.size(), config.threads, [&](std::size_t c) {
    const Cell& cell = cells[c];
    ToyRegressionSpec spec;
    spec.setup = cell.setup;
    spec.m_train = cell.m_train;
    spec.m_val = config.m_val;
    spec.m_test = config.m_test;
    spec.noise_std = config.noise_std;
    spec.seed = cell_seed(config.seed, static_cast<std::size_t>(cell.setup), cell.m_train, cell.replicate);
    const ToyData data = gen_toy_regression(spec);
    const Design design(data.train);
    const Shape& shape = data.true_weight.shape();
    SolverConfig solver = config.solver;
    solver.seed = spec.seed;

    std::map<std::string, MethodOutcome> outcomes;
    std::map<std::string, std::string> failures;
    auto run = [&](const std::string& method) {
      if (outcomes.count(method) || failures.count(method)) return;
      const auto start = std::chrono::steady_clock::now();
      try {
        MethodOutcome o;
        o.cv = cross_validate(design, data.val, NormKind::parse(method, shape), config.cv, solver);
        o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        outcomes.emplace(method, std::move(o));
      } catch (const Error& e) {
        failures.emplace(method, e.what());
      }
    };

    for (const auto& method : config.methods) {
      ExperimentRow row;
      row.setup = to_string(cell.setup);
      row.method = method;
      row.m_train = cell.m_train;
      row.replicate = cell.replicate;
      const MethodOutcome* chosen = nullptr;
      if (method == "modewise_cv") {
        double seconds = 0.0;
        for (std::size_t k = 1; k <= shape.size(); ++k) {
          const std::string name = "mode" + std::to_string(k);
          run(name);
          auto it = outcomes.find(name);
          if (it == outcomes.end()) continue;
          seconds += it->second.seconds;
          if (!chosen || it->second.cv.best_metric < chosen->cv.best_metric) {
            chosen = &it->second;
            row.selected_mode = k;
          }
        }
        row.fit_seconds = seconds;
        if (!chosen) row.error = "every single-mode fit failed";
      } else {
        run(method);
        auto it = outcomes.find(method);
        if (it != outcomes.end()) {
          chosen = &it->second;
          row.fit_seconds = chosen->seconds;
        } else {
          row.error = failures[method];
        }
      }
      if (chosen) {
        row.lambda = chosen->cv.best_lambda;
        row.val_mse = chosen->cv.best_metric;
        row.test_mse = test_metric(chosen->cv.best_fit.model, data.test);
        row.ok = std::isfinite(row.test_mse);
        if (!row.ok) row.error = "non-finite test error";
      } else {
        row.ok = false;
        row.test_mse = row.val_mse = std::numeric_limits<double>::quiet_NaN();
      }
      per_cell[c].push_back(std::move(row));
    }
  });

  ExperimentResult result;
  for (auto& rows : per_cell)
    for (auto& row : rows) result.rows.push_back(std::move(row));
  result.aggregate = aggregate_rows(result.rows);
  return result;
}

std::vector<AggregateRow> aggregate_rows(const std::vector<ExperimentRow>& rows) {
  std::vector<AggregateRow> out;
  std::map<std::tuple<std::string, std::string, std::size_t>, std::size_t> index;
  std::vector<std::vector<const ExperimentRow*>> members;
  for (const auto& row : rows) {
    const auto key = std::make_tuple(row.setup, row.method, row.m_train);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back({row.setup, row.method, row.m_train, 0, 0.0, 0.0, 0.0});
      members.emplace_back();
    }
    if (row.ok) members[it->second].push_back(&row);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& group = members[i];
    AggregateRow& a = out[i];
    a.count = group.size();
    if (group.empty()) {
      a.mean_mse = a.std_mse = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    for (const auto* r : group) {
      a.mean_mse += r->test_mse;
      a.mean_seconds += r->fit_seconds;
    }
    a.mean_mse /= static_cast<double>(group.size());
    a.mean_seconds /= static_cast<double>(group.size());
    if (group.size() > 1) {
      double ss = 0.0;
      for (const auto* r : group) ss += (r->test_mse - a.mean_mse) * (r->test_mse - a.mean_mse);
      a.std_mse = std::sqrt(ss / static_cast<double>(group.size() - 1));
    }
  }
  return out;
}

std::string tidy_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "setup,method,m_train,replicate,lambda,selected_mode,val_mse,test_mse,ok,error\n";
  for (const auto& r : result.rows)
    out << r.setup << ',' << r.method << ',' << r.m_train << ',' << r.replicate << ',' << format_double(r.lambda)
        << ',' << r.selected_mode << ',' << format_double(r.val_mse) << ',' << format_double(r.test_mse) << ','
        << (r.ok ? 1 : 0) << ',' << csv_escape(r.error) << '\n';
  return out.str();
}

std::string aggregate_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "setup,method,m_train,count,mean_mse,std_mse\n";
  for (const auto& a : result.aggregate)
    out << a.setup << ',' << a.method << ',' << a.m_train << ',' << a.count << ',' << format_double(a.mean_mse)
        << ',' << format_double(a.std_mse) << '\n';
  return out.str();
}

std::string timing_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "setup,method,m_train,replicate,seconds\n";
  for (const auto& r : result.rows)
    out << r.setup << ',' << r.method << ',' << r.m_train << ',' << r.replicate << ','
        << format_double(r.fit_seconds) << '\n';
  return out.str();
}

std::string gnuplot_script(const ExperimentResult& result) {
  std::vector<std::string> setups;
  std::vector<std::string> methods;
  for (const auto& a : result.aggregate) {
    if (std::find(setups.begin(), setups.end(), a.setup) == setups.end()) setups.push_back(a.setup);
    if (std::find(methods.begin(), methods.end(), a.method) == methods.end()) methods.push_back(a.method);
  }
  std::ostringstream out;
  out << "# gnuplot script: mean test MSE against training size\n";
  out << "set terminal pngcairo size 1400,450\nset output 'mse.png'\n";
  out << "set multiplot layout 1," << setups.size() << "\n";
  out << "set logscale y\nset xlabel 'training samples'\nset ylabel 'test MSE'\nset key top right\n";
  for (const auto& setup : setups)
    for (const auto& method : methods) {
      out << "$" << setup << "_" << method << " << EOD\n";
      for (const auto& a : result.aggregate)
        if (a.setup == setup && a.method == method && a.count > 0)
          out << a.m_train << ' ' << format_double(a.mean_mse) << ' ' << format_double(a.std_mse) << '\n';
      out << "EOD\n";
    }
  for (const auto& setup : setups) {
    out << "set title 'setup " << setup << "'\nplot ";
    for (std::size_t i = 0; i < methods.size(); ++i)
      out << (i ? ", \\\n     " : "") << "$" << setup << "_" << methods[i]
          << " using 1:2:3 with yerrorlines title '" << methods[i] << "'";
    out << "\n";
  }
  out << "unset multiplot\n";
  return out.str();
}

void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + (dir / name).string());
    out << text;
  };
  write("tidy.csv", tidy_csv(result));
  write("aggregate.csv", aggregate_csv(result));
  write("timing.csv", timing_csv(result));
  write("plot.gp", gnuplot_script(result));
}

std::vector<ExperimentRow> parse_tidy_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<ExperimentRow> rows;
  if (!std::getline(in, line)) return rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() == 9) f.emplace_back();
    if (f.size() != 10) throw FormatError("tidy CSV row has " + std::to_string(f.size()) + " fields");
    ExperimentRow r;
    r.setup = f[0];
    r.method = f[1];
    r.m_train = std::stoull(f[2]);
    r.replicate = std::stoull(f[3]);
    r.lambda = std::stod(f[4]);
    r.selected_mode = std::stoull(f[5]);
    r.val_mse = std::stod(f[6]);
    r.test_mse = std::stod(f[7]);
    r.ok = f[8] == "1";
    r.error = f[9];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace tracenorm
