#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tracenorm/dataset_io.hpp"
#include "tracenorm/model_io.hpp"
#include "tracenorm/tensor_io.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("tracenorm_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(TRACENORM_CLI_PATH) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                            " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void gen(const std::string& setup, int m_train) const {
    ASSERT_EQ(run("--seed 3 --out " + path("data") + " gen --setup " + setup + " --m-train " + std::to_string(m_train) +
                  " --m-val 20 --m-test 20"),
              0)
        << read(dir_ / "stderr.txt");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenWritesDatasets) {
  gen("C", 30);
  const auto train = tracenorm::read_dataset(path("data/train"));
  EXPECT_EQ(train.size(), 30u);
  EXPECT_EQ(train.shape(), (tracenorm::Shape{4, 10, 10}));
  EXPECT_TRUE(fs::exists(path("data/true_weight.tnsr")));
}

TEST_F(Cli, FitWritesModelAndReport) {
  gen("C", 30);
  EXPECT_EQ(run("--out " + path("fit") + " fit --data " + path("data/train") + " --test " + path("data/test") +
                " --norm scaled_latent --lambda 1 --beta-rule lambda_scaled"),
            0)
      << read(dir_ / "stderr.txt");
  const auto model = tracenorm::load_model(path("fit/model.tnmd"));
  EXPECT_EQ(model.lambda, 1.0);
  EXPECT_EQ(model.latent_parts.size(), 3u);
  EXPECT_NE(read(path("fit/report.json")).find("\"iterations\""), std::string::npos);
  EXPECT_NE(read(dir_ / "stdout.txt").find("test metric"), std::string::npos);
}

TEST_F(Cli, CvWritesTable) {
  gen("C", 30);
  std::ofstream(path("cfg.json")) << R"({"cv": {"grid": "log", "lo": 0.1, "hi": 10, "points": 3}})";
  EXPECT_EQ(run("--config " + path("cfg.json") + " --out " + path("cv") + " cv --train " + path("data/train") +
                " --val " + path("data/val") + " --norm ridge"),
            0)
      << read(dir_ / "stderr.txt");
  const std::string csv = read(path("cv/cv.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST_F(Cli, ExperimentBoundsDualnormFeatures) {
  std::ofstream(path("cfg.json"))
      << R"({"setups": ["C"], "methods": ["scaled_latent", "ridge"], "train_sizes": [30], "replicates": 1,
            "m_val": 20, "m_test": 20, "cv": {"lambdas": [0.5, 5.0]}})";
  EXPECT_EQ(run("--config " + path("cfg.json") + " --out " + path("exp") + " experiment"), 0)
      << read(dir_ / "stderr.txt");
  for (const char* f : {"tidy.csv", "aggregate.csv", "timing.csv", "plot.gp", "config.json"})
    EXPECT_TRUE(fs::exists(dir_ / "exp" / f)) << f;

  EXPECT_EQ(run("--out " + path("b") + " bounds --shape 4,10,10 --ranks 3,4,8 --m 100"), 0);
  const std::string bounds = read(path("b/bounds.csv"));
  EXPECT_EQ(std::count(bounds.begin(), bounds.end(), '\n'), 5);

  EXPECT_EQ(run("--seed 2 --out " + path("d") + " dualnorm --shape 3,4,5 --m 10 --trials 5"), 0);
  EXPECT_NE(read(path("d/dualnorm.csv")).find("latent,"), std::string::npos);

  tracenorm::DenseTensor signal({2, 3, 6});
  for (std::size_t i = 0; i < signal.size(); ++i) signal[i] = static_cast<double>((i * 7) % 11);
  tracenorm::save_tensor(path("signal.tnsr"), signal);
  EXPECT_EQ(run("--out " + path("f") + " features --input " + path("signal.tnsr")), 0) << read(dir_ / "stderr.txt");
  EXPECT_EQ(tracenorm::load_tensor(path("f/features.tnsr")).shape(), (tracenorm::Shape{2, 3, 3}));
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  gen("C", 30);
  EXPECT_EQ(run("fit"), 2);
  EXPECT_EQ(run("--bogus gen"), 2);
  EXPECT_EQ(run("--out " + path("x") + " fit --data " + path("data/train") + " --norm nuclear"), 2);
  EXPECT_EQ(run("--out " + path("x") + " fit --data " + path("data/train") + " --lambda -1"), 2);
  EXPECT_EQ(run("--out " + path("x") + " fit --data " + path("missing")), 2);
  std::ofstream(path("bad.json")) << R"({"solver": {"lambda": 1, "speed": 3}})";
  EXPECT_EQ(run("--config " + path("bad.json") + " --out " + path("x") + " fit --data " + path("data/train")), 2);
  EXPECT_EQ(run("bounds --shape 3,3 --ranks 4,1 --m 10"), 2);
  EXPECT_EQ(run("gen --setup Z"), 2);
}

TEST_F(Cli, NumericalFailureExitsThree) {
  // Unregularized least squares with fewer samples than features is singular.
  gen("C", 30);
  EXPECT_EQ(run("--out " + path("x") + " fit --data " + path("data/train") + " --norm ridge --lambda 0"), 3)
      << read(dir_ / "stderr.txt");
}
