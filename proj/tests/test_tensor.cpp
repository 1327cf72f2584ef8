#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "test_support.hpp"
#include "tracenorm/config.hpp"
#include "tracenorm/error.hpp"
#include "tracenorm/latent_norm.hpp"
#include "tracenorm/linalg.hpp"
#include "tracenorm/tensor.hpp"
#include "tracenorm/tensor_io.hpp"

using namespace tracenorm;
using tracenorm::fixtures::random_matrix;

namespace {

DenseTensor iota_tensor(const Shape& shape) {
  DenseTensor t(shape);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i + 1);
  return t;
}

// Entry-by-entry unfolding through multi-index enumeration: the column index
// runs over the remaining modes with the lowest one varying fastest.
Matrix brute_force_unfold(const DenseTensor& t, std::size_t mode) {
  const Shape& s = t.shape();
  const std::size_t n = t.size();
  Matrix out(static_cast<Eigen::Index>(s[mode]), static_cast<Eigen::Index>(n / s[mode]));
  std::vector<std::size_t> idx(s.size(), 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rem = flat;
    for (std::size_t k = 0; k < s.size(); ++k) {
      idx[k] = rem % s[k];
      rem /= s[k];
    }
    std::size_t col = 0;
    std::size_t stride = 1;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (k == mode) continue;
      col += idx[k] * stride;
      stride *= s[k];
    }
    out(static_cast<Eigen::Index>(idx[mode]), static_cast<Eigen::Index>(col)) = t.at(idx);
  }
  return out;
}

double jacobi_trace_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Shape random_shape(std::size_t order, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  Shape s(order);
  for (auto& n : s) n = dim(rng);
  return s;
}

}  // namespace

TEST(Unfold, MatrixModeOneIsIdentity) {
  // [[1,2],[3,4]] stored first-index-fastest.
  const DenseTensor t(Shape{2, 2}, {1, 3, 2, 4});
  Matrix expected(2, 2);
  expected << 1, 2, 3, 4;
  EXPECT_EQ(unfold(t, 0), expected);
}

TEST(Unfold, MatrixModeTwoIsTranspose) {
  const DenseTensor t(Shape{2, 2}, {1, 3, 2, 4});
  Matrix expected(2, 2);
  expected << 1, 3, 2, 4;
  EXPECT_EQ(unfold(t, 1), expected);
}

TEST(Unfold, WorkedExampleSecondMode) {
  const DenseTensor t = iota_tensor({2, 3, 2});
  Matrix expected(3, 4);
  expected << 1, 2, 7, 8,
              3, 4, 9, 10,
              5, 6, 11, 12;
  EXPECT_EQ(unfold(t, 1), expected);
  EXPECT_EQ(unfold(t, 1), brute_force_unfold(t, 1));
}

TEST(Unfold, MatchesBruteForceEnumeration) {
  std::mt19937_64 rng(7);
  for (std::size_t order = 1; order <= 5; ++order) {
    const DenseTensor t = gaussian_tensor(random_shape(order, rng), rng);
    for (std::size_t k = 0; k < order; ++k) EXPECT_EQ(unfold(t, k), brute_force_unfold(t, k));
  }
}

TEST(Unfold, RejectsModeOutOfRange) {
  const DenseTensor t = iota_tensor({2, 3});
  EXPECT_THROW(unfold(t, 2), ShapeError);
}

TEST(Fold, RoundTripIsBitExact) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const DenseTensor t = gaussian_tensor(random_shape(1 + rep % 4, rng), rng);
    for (std::size_t k = 0; k < t.order(); ++k) EXPECT_EQ(fold(unfold(t, k), k, t.shape()), t);
  }
}

TEST(Fold, ZeroMatrixGivesZeroTensor) {
  const Shape s{2, 3, 4};
  EXPECT_EQ(fold(Matrix::Zero(3, 8), 1, s), DenseTensor::zeros(s));
}

TEST(Fold, WrongModeChangesNonSymmetricMatrix) {
  const DenseTensor t(Shape{2, 2}, {1, 3, 2, 4});
  EXPECT_NE(fold(unfold(t, 0), 1, t.shape()), t);
}

TEST(Fold, RejectsDimensionMismatch) {
  EXPECT_THROW(fold(Matrix::Zero(2, 5), 0, Shape{2, 3}), ShapeError);
}

TEST(Unfold, IsLinearAndPreservesFrobenius) {
  std::mt19937_64 rng(3);
  const Shape s{3, 4, 2};
  const DenseTensor a = gaussian_tensor(s, rng);
  const DenseTensor b = gaussian_tensor(s, rng);
  for (std::size_t k = 0; k < 3; ++k) {
    const Matrix lhs = unfold(2.5 * a + (-1.5) * b, k);
    const Matrix rhs = 2.5 * unfold(a, k) - 1.5 * unfold(b, k);
    EXPECT_LT((lhs - rhs).norm(), 1e-13);
    EXPECT_NEAR(unfold(a, k).norm(), frobenius(a), 1e-12);
  }
}

TEST(Inner, ZeroSelfAndBruteForce) {
  std::mt19937_64 rng(5);
  const Shape s{3, 2, 4};
  const DenseTensor a = gaussian_tensor(s, rng);
  const DenseTensor b = gaussian_tensor(s, rng);
  EXPECT_EQ(inner(a, DenseTensor::zeros(s)), 0.0);
  EXPECT_NEAR(inner(a, a), frobenius(a) * frobenius(a), 1e-12);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  EXPECT_NEAR(inner(a, b), acc, 1e-12);
  EXPECT_THROW(inner(a, DenseTensor::zeros({3, 2})), ShapeError);
}

TEST(Frobenius, Examples) {
  EXPECT_EQ(frobenius(DenseTensor::zeros({2, 2})), 0.0);
  DenseTensor one_hot = DenseTensor::zeros({2, 3});
  one_hot[4] = 1.0;
  EXPECT_EQ(frobenius(one_hot), 1.0);
  std::mt19937_64 rng(9);
  const DenseTensor t = gaussian_tensor({4, 5}, rng);
  EXPECT_NEAR(frobenius(t), t.vec().norm(), 1e-12);
}

TEST(Shape, ValidatesEntries) {
  EXPECT_THROW(validate_shape({}), ShapeError);
  EXPECT_THROW(validate_shape({2, 0}), ShapeError);
  EXPECT_THROW(DenseTensor(Shape{2, 2}, {1, 2, 3}), ShapeError);
}

TEST(Tucker, FullRankRecoversShape) {
  const DenseTensor t = tucker_random({{3, 4, 2}, {3, 4, 2}}, 1);
  EXPECT_EQ(multilinear_rank(t).ranks, (std::vector<std::size_t>{3, 4, 2}));
}

TEST(Tucker, CubicThreeThreeThree) {
  const DenseTensor t = tucker_random({{10, 10, 10}, {3, 3, 3}}, 2);
  EXPECT_EQ(multilinear_rank(t).ranks, (std::vector<std::size_t>{3, 3, 3}));
}

TEST(Tucker, SetupCRanks) {
  const DenseTensor t = tucker_random({{4, 10, 10}, {3, 4, 8}}, 3);
  EXPECT_EQ(multilinear_rank(t).ranks, (std::vector<std::size_t>{3, 4, 8}));
}

TEST(Tucker, RejectsRanksAboveShape) {
  EXPECT_THROW(tucker_random({{3, 3}, {4, 1}}, 0), ShapeError);
}

TEST(Tucker, DeterministicGivenSeed) {
  EXPECT_EQ(tucker_random({{5, 5, 5}, {2, 2, 2}}, 42), tucker_random({{5, 5, 5}, {2, 2, 2}}, 42));
  EXPECT_NE(tucker_random({{5, 5, 5}, {2, 2, 2}}, 42), tucker_random({{5, 5, 5}, {2, 2, 2}}, 43));
}

TEST(MultilinearRank, ZeroAndRankOne) {
  EXPECT_EQ(multilinear_rank(DenseTensor::zeros({3, 4, 5})).ranks, (std::vector<std::size_t>{0, 0, 0}));
  std::mt19937_64 rng(4);
  const Vector a = tracenorm::fixtures::random_vector(3, rng);
  const Vector b = tracenorm::fixtures::random_vector(4, rng);
  const Vector c = tracenorm::fixtures::random_vector(5, rng);
  DenseTensor t({3, 4, 5});
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t i = 0; i < 3; ++i)
        t[i + 3 * (j + 4 * k)] = a(static_cast<Eigen::Index>(i)) * b(static_cast<Eigen::Index>(j)) *
                                 c(static_cast<Eigen::Index>(k));
  EXPECT_EQ(multilinear_rank(t).ranks, (std::vector<std::size_t>{1, 1, 1}));
}

TEST(OverlappedNorm, Examples) {
  EXPECT_EQ(overlapped_norm(DenseTensor::zeros({3, 3, 3}), unit_weights({3, 3, 3})), 0.0);
  std::mt19937_64 rng(12);
  const DenseTensor m = gaussian_tensor({4, 6}, rng);
  const std::vector<double> one{1.0};
  const DenseTensor as_vector = DenseTensor::from_vector({24}, m.vec());
  EXPECT_NEAR(overlapped_norm(as_vector, one), jacobi_trace_norm(unfold(as_vector, 0)), 1e-12);

  const DenseTensor t = gaussian_tensor({3, 3, 3}, rng);
  const std::vector<double> w{0.5, 1.0, 2.0};
  double oracle = 0.0;
  for (std::size_t k = 0; k < 3; ++k) oracle += w[k] * jacobi_trace_norm(brute_force_unfold(t, k));
  EXPECT_NEAR(overlapped_norm(t, w), oracle, 1e-10);
}

TEST(LatentNorm, SingleModeIsTraceNorm) {
  std::mt19937_64 rng(21);
  const DenseTensor t = gaussian_tensor({5, 4}, rng);
  SolverConfig cfg;
  cfg.tol = 1e-8;
  const std::vector<double> w{1.0, 1.0};
  // A matrix under two modes with unit weights: both unfoldings have the same
  // trace norm and the infimum is that value.
  const LatentNormResult r = latent_norm_value(t, w, cfg);
  EXPECT_NEAR(r.value, jacobi_trace_norm(unfold(t, 0)), 1e-4 * r.value);

  const DenseTensor v = DenseTensor::from_vector({20}, t.vec());
  const std::vector<double> one{1.0};
  EXPECT_NEAR(latent_norm_value(v, one, cfg).value, v.vec().norm(), 1e-10);
}

TEST(LatentNorm, BelowOverlappedAndHomogeneous) {
  std::mt19937_64 rng(31);
  SolverConfig cfg;
  for (int rep = 0; rep < 5; ++rep) {
    const DenseTensor t = gaussian_tensor({3, 4, 5}, rng);
    for (const auto& w : {unit_weights(t.shape()), dimension_scaled_weights(t.shape())}) {
      const LatentNormResult r = latent_norm_value(t, w, cfg);
      EXPECT_LE(r.value, overlapped_norm(t, w) + 1e-12);
      EXPECT_LE(r.lower_bound, r.value + 1e-9);
      DenseTensor sum = DenseTensor::zeros(t.shape());
      for (const auto& p : r.parts) sum += p;
      EXPECT_LT(frobenius(sum - t), 1e-8 * frobenius(t));
      for (double c : {-3.0, 0.25, 7.5}) {
        const double scaled = latent_norm_value(c * t, w, cfg).value;
        EXPECT_NEAR(scaled, std::abs(c) * r.value, 1e-8 * std::abs(c) * r.value);
      }
      EXPECT_NEAR(overlapped_norm(-2.0 * t, w), 2.0 * overlapped_norm(t, w), 1e-10 * overlapped_norm(t, w));
    }
  }
}

TEST(LatentNorm, BelowEverySingleModeValue) {
  std::mt19937_64 rng(32);
  const DenseTensor t = gaussian_tensor({2, 6, 3}, rng);
  const auto w = unit_weights(t.shape());
  const LatentNormResult r = latent_norm_value(t, w, SolverConfig{});
  for (std::size_t k = 0; k < 3; ++k) EXPECT_LE(r.value, jacobi_trace_norm(unfold(t, k)) + 1e-10);
}

TEST(NormBounds, TuckerSamplesSatisfyRankInequalities) {
  const std::vector<TuckerSpec> specs = {{{10, 10, 10}, {3, 3, 3}}, {{10, 10, 10}, {3, 5, 8}}, {{4, 10, 10}, {3, 4, 8}}};
  std::mt19937_64 rng(77);
  for (const auto& spec : specs) {
    for (int rep = 0; rep < 3; ++rep) {
      const DenseTensor t = tucker_random(spec, rng);
      const double f = frobenius(t);
      double root_sum = 0.0;
      double min_rank = 1e300;
      double min_ratio = 1e300;
      for (std::size_t k = 0; k < 3; ++k) {
        root_sum += std::sqrt(static_cast<double>(spec.ranks[k]));
        min_rank = std::min(min_rank, static_cast<double>(spec.ranks[k]));
        min_ratio = std::min(min_ratio, static_cast<double>(spec.ranks[k]) / static_cast<double>(spec.shape[k]));
      }
      EXPECT_LE(overlapped_norm(t, unit_weights(t.shape())), root_sum * f + 1e-6);
      EXPECT_LE(latent_norm_value(t, unit_weights(t.shape()), SolverConfig{}).value, std::sqrt(min_rank) * f + 1e-6);
      EXPECT_LE(latent_norm_value(t, dimension_scaled_weights(t.shape()), SolverConfig{}).value,
                std::sqrt(min_ratio) * f + 1e-6);
    }
  }
}

TEST(ModeProduct, MatchesUnfoldedProduct) {
  std::mt19937_64 rng(8);
  const DenseTensor t = gaussian_tensor({3, 4, 2}, rng);
  const Matrix u = random_matrix(5, 4, rng);
  const DenseTensor p = mode_product(t, u, 1);
  EXPECT_EQ(p.shape(), (Shape{3, 5, 2}));
  EXPECT_LT((unfold(p, 1) - u * unfold(t, 1)).norm(), 1e-12);
}

TEST(TensorFile, RoundTripAndLayout) {
  std::mt19937_64 rng(1);
  const DenseTensor t = gaussian_tensor({2, 3, 4}, rng);
  std::stringstream buf;
  write_tensor(buf, t);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 4u + 4u + 4u + 3u * 8u + 24u * 8u);
  EXPECT_EQ(bytes.substr(0, 4), "TNSR");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 1u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 3u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 2u);
  std::stringstream in(bytes);
  EXPECT_EQ(read_tensor(in), t);
}

TEST(TensorFile, RejectsCorruptInput) {
  const DenseTensor t = iota_tensor({2, 2});
  std::stringstream buf;
  write_tensor(buf, t);
  std::string bytes = buf.str();

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::stringstream a(bad_magic);
  EXPECT_THROW(read_tensor(a), FormatError);

  std::string bad_version = bytes;
  bad_version[4] = 2;
  std::stringstream b(bad_version);
  EXPECT_THROW(read_tensor(b), FormatError);

  std::stringstream c(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_tensor(c), FormatError);

  std::string zero_dim = bytes;
  zero_dim[12] = 0;
  std::stringstream d(zero_dim);
  EXPECT_THROW(read_tensor(d), FormatError);
}
