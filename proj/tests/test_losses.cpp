#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "test_support.hpp"
#include "tracenorm/design.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/losses.hpp"
#include "tracenorm/model.hpp"
#include "tracenorm/norm_kind.hpp"
#include "tracenorm/solvers.hpp"

using namespace tracenorm;

namespace {

long double logistic_oracle(long double pred, long double y) { return std::log1p(std::exp(-y * pred)); }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

TEST(SquaredLoss, Examples) {
  EXPECT_EQ(squared_loss(1.0, 1.0), 0.0);
  EXPECT_EQ(squared_loss(0.0, 2.0), 4.0);
  EXPECT_EQ(squared_loss(-1.5, 0.5), 4.0);
}

TEST(LogisticLoss, Examples) {
  EXPECT_NEAR(logistic_loss(0.0, 1.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(logistic_loss(0.0, -1.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(logistic_loss(2.0, 1.0), std::log1p(std::exp(-2.0)), 1e-15);
  EXPECT_NEAR(logistic_loss(2.0, -1.0), std::log1p(std::exp(2.0)), 1e-14);
  EXPECT_THROW(logistic_loss(0.0, 0.5), ConfigError);
}

TEST(LogisticLoss, MatchesExtendedPrecisionOracle) {
  for (double z = -700.0; z <= 700.0; z += 0.37) {
    for (double y : {-1.0, 1.0}) {
      const double got = logistic_loss(z, y);
      const double want = static_cast<double>(logistic_oracle(z, y));
      EXPECT_TRUE(std::isfinite(got));
      EXPECT_LE(std::abs(got - want), 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, want))
          << "z=" << z << " y=" << y;
    }
  }
  EXPECT_NEAR(logistic_loss(1000.0, -1.0), 1000.0, 1e-12);
  EXPECT_GE(logistic_loss(1000.0, 1.0), 0.0);
}

TEST(LogisticLoss, OneLipschitz) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const double a = u(rng);
    const double b = u(rng);
    EXPECT_LE(std::abs(logistic_loss(a, 1.0) - logistic_loss(b, 1.0)), std::abs(a - b) + 1e-14);
  }
}

TEST(Conjugates, Examples) {
  const std::vector<double> y{1.0, -1.0};
  EXPECT_EQ(conjugate_squared(std::vector<double>{0.0, 0.0}, y), 0.0);
  EXPECT_DOUBLE_EQ(conjugate_squared(std::vector<double>{1.0, 2.0}, y), 0.5 - 1.0 + 2.0 + 2.0);
  EXPECT_EQ(conjugate_logistic(std::vector<double>{0.0, 0.0}, y), 0.0);
  EXPECT_EQ(conjugate_logistic(std::vector<double>{1.0, -1.0}, y), 0.0);
  EXPECT_NEAR(conjugate_logistic(std::vector<double>{0.5, -0.5}, y), 2.0 * std::log(0.5), 1e-15);
  EXPECT_THROW(conjugate_logistic(std::vector<double>{1.5, 0.0}, y), ConfigError);
  EXPECT_THROW(conjugate_squared(std::vector<double>{1.0}, y), ShapeError);
}

// l(z) + l*(-a) >= -a z with equality at the dual optimum for each sample.
TEST(Conjugates, FenchelYoungSquared) {
  for (double y : {-2.0, 0.0, 1.5}) {
    for (double z = -3.0; z <= 3.0; z += 0.25) {
      for (double a = -3.0; a <= 3.0; a += 0.25) {
        const double lhs = 0.5 * squared_loss(z, y) + conjugate_squared(std::vector<double>{a}, std::vector<double>{y});
        EXPECT_GE(lhs + a * z, -1e-12);
      }
      const double a_star = y - z;
      const double lhs = 0.5 * squared_loss(z, y) + conjugate_squared(std::vector<double>{a_star}, std::vector<double>{y});
      EXPECT_NEAR(lhs + a_star * z, 0.0, 1e-12);
    }
  }
}

TEST(Conjugates, FenchelYoungLogistic) {
  for (double y : {-1.0, 1.0}) {
    for (double z = -4.0; z <= 4.0; z += 0.25) {
      for (double p = 0.0; p <= 1.0; p += 0.05) {
        const double a = y * p;
        const double lhs = logistic_loss(z, y) + conjugate_logistic(std::vector<double>{a}, std::vector<double>{y});
        EXPECT_GE(lhs + a * z, -1e-12);
      }
      const double a_star = y * sigmoid(-y * z);
      const double lhs = logistic_loss(z, y) + conjugate_logistic(std::vector<double>{a_star}, std::vector<double>{y});
      EXPECT_NEAR(lhs + a_star * z, 0.0, 1e-12);
    }
  }
}

TEST(DualFeasible, BalanceAndBox) {
  const std::vector<double> y{1.0, -1.0, 1.0};
  EXPECT_TRUE(dual_feasible(std::vector<double>{0.5, -1.0, 0.5}, y, TaskKind::Regression));
  EXPECT_FALSE(dual_feasible(std::vector<double>{0.5, -1.0, 0.6}, y, TaskKind::Regression));
  EXPECT_TRUE(dual_feasible(std::vector<double>{0.5, -1.0, 0.5}, y, TaskKind::Classification));
  EXPECT_FALSE(dual_feasible(std::vector<double>{1.5, -1.0, -0.5}, y, TaskKind::Classification));
}

TEST(DualObjective, SignConventions) {
  const std::vector<double> y{1.0, -1.0};
  const std::vector<double> a{0.5, -0.5};
  EXPECT_DOUBLE_EQ(dual_objective(a, y, TaskKind::Regression), -conjugate_squared(a, y));
  EXPECT_DOUBLE_EQ(dual_objective(a, y, TaskKind::Classification), -2.0 * std::log(0.5));
}

TEST(EmpiricalLoss, Scaling) {
  const std::vector<double> s{0.0, 1.0};
  const std::vector<double> y{1.0, -1.0};
  EXPECT_DOUBLE_EQ(empirical_loss(s, y, TaskKind::Regression, SquaredLossScale::Unit), 5.0);
  EXPECT_DOUBLE_EQ(empirical_loss(s, y, TaskKind::Regression, SquaredLossScale::Half), 2.5);
  EXPECT_NEAR(empirical_loss(s, y, TaskKind::Classification, SquaredLossScale::Half),
              std::log(2.0) + std::log1p(std::exp(1.0)), 1e-14);
}

TEST(PrimalObjective, HandComputedOverlapped) {
  Dataset d;
  d.covariates = {DenseTensor(Shape{2, 2}, {1, 0, 0, 0}), DenseTensor(Shape{2, 2}, {0, 0, 0, 1})};
  d.targets = {1.0, 3.0};
  Model m;
  m.weight = DenseTensor(Shape{2, 2}, {2, 0, 0, 1});  // diag(2, 1): trace norm 3 on both unfoldings
  m.bias = 0.5;
  m.lambda = 0.1;
  m.norm = NormKind::overlapped({2, 2});
  // residuals: 1 - 2.5 = -1.5, 3 - 1.5 = 1.5
  EXPECT_NEAR(primal_objective(d, m), 4.5 + 0.1 * 6.0, 1e-14);
  EXPECT_NEAR(primal_objective(d, m, SquaredLossScale::Half), 2.25 + 0.6, 1e-14);
  m.norm = NormKind::ridge();
  EXPECT_NEAR(primal_objective(d, m), 4.5 + 0.05 * 5.0, 1e-14);
}

TEST(PrimalObjective, LatentReadsParts) {
  Dataset d;
  d.covariates = {DenseTensor(Shape{2, 2}, {1, 0, 0, 0})};
  d.targets = {0.0};
  Model m;
  m.norm = NormKind::latent({2, 2});
  m.lambda = 1.0;
  m.latent_parts = {DenseTensor(Shape{2, 2}, {1, 0, 0, 0}), DenseTensor(Shape{2, 2}, {0, 0, 0, 2})};
  m.weight = m.latent_parts[0] + m.latent_parts[1];
  EXPECT_NEAR(primal_objective(d, m), 1.0 + 1.0 + 2.0, 1e-14);
  m.latent_parts.pop_back();
  EXPECT_THROW(primal_objective(d, m), ShapeError);
}

// Any primal point dominates any scaled dual point.
TEST(WeakDuality, RandomPrimalAndDualPoints) {
  std::mt19937_64 rng(4);
  const Shape shape{3, 4, 2};
  const DenseTensor truth = tucker_random({shape, {1, 2, 1}}, rng);
  for (TaskKind task : {TaskKind::Regression, TaskKind::Classification}) {
    const Dataset data = task == TaskKind::Regression ? fixtures::regression_data(truth, 12, 0.1, 0.3, rng)
                                                      : fixtures::classification_data(truth, 12, 0.3, rng);
    const Design design(data);
    for (const NormKind& norm : {NormKind::latent(shape), NormKind::scaled_latent(shape)}) {
      for (int rep = 0; rep < 20; ++rep) {
        Model model;
        model.norm = norm;
        model.lambda = 0.5;
        model.task = task;
        model.weight = DenseTensor(shape);
        for (std::size_t k = 0; k < 3; ++k) {
          model.latent_parts.push_back(0.3 * gaussian_tensor(shape, rng));
          model.weight += model.latent_parts.back();
        }
        model.bias = 0.1 * rep;
        const double primal = primal_objective(data, model, SquaredLossScale::Half);
        Vector alpha = fixtures::random_vector(12, rng);
        if (task == TaskKind::Classification)
          for (Eigen::Index i = 0; i < 12; ++i) alpha(i) = data.targets[i] * std::abs(std::tanh(alpha(i)));
        const DualityGap gap =
            relative_duality_gap(design, alpha, norm.modes, norm.mode_lambdas(model.lambda), primal);
        EXPECT_TRUE(dual_feasible(std::span<const double>(gap.alpha_hat.data(), 12), data.targets, task, 1e-9));
        EXPECT_LE(gap.dual, primal + 1e-12);
        EXPECT_GE(gap.relative_gap, -1e-12);
      }
    }
  }
}

TEST(WeakDuality, BalanceDualProperties) {
  std::mt19937_64 rng(5);
  Vector yy = fixtures::random_vector(9, rng).unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
  yy(0) = 1.0;
  yy(1) = -1.0;
  const Vector a = fixtures::random_vector(9, rng);
  const Vector r = balance_dual(a, yy, TaskKind::Regression);
  EXPECT_NEAR(r.sum(), 0.0, 1e-12);
  EXPECT_LT((r - (a.array() - a.mean()).matrix()).norm(), 1e-12);
  const Vector c = balance_dual(a, yy, TaskKind::Classification);
  EXPECT_NEAR(c.sum(), 0.0, 1e-12);
  for (Eigen::Index i = 0; i < 9; ++i) {
    EXPECT_GE(yy(i) * c(i), -1e-15);
    EXPECT_LE(yy(i) * c(i), 1.0 + 1e-15);
  }
}
