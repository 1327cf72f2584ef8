#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tracenorm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Mode dimensions (n_1, ..., n_K). Modes are indexed from 0 in the API.
using Shape = std::vector<std::size_t>;

std::size_t element_count(const Shape& shape);
std::string shape_to_string(const Shape& shape);

/// Throws ShapeError unless K >= 1 and every n_k >= 1.
void validate_shape(const Shape& shape);

/// Dense K-way tensor. Elements are stored with the first index varying
/// fastest, i.e. entry (i_1, ..., i_K) lives at
/// i_1 + n_1 * (i_2 + n_2 * (i_3 + ...)).
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(Shape shape);
  DenseTensor(Shape shape, std::vector<double> data);

  static DenseTensor zeros(const Shape& shape) { return DenseTensor(shape); }
  static DenseTensor from_vector(const Shape& shape, const Vector& v);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t order() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t dim(std::size_t mode) const { return shape_.at(mode); }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  /// Multi-index access; throws ShapeError on rank or bound mismatch.
  double& at(std::span<const std::size_t> index);
  double at(std::span<const std::size_t> index) const;

  Eigen::Map<Vector> vec() { return {data_.data(), static_cast<Eigen::Index>(data_.size())}; }
  Eigen::Map<const Vector> vec() const {
    return {data_.data(), static_cast<Eigen::Index>(data_.size())};
  }

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(double scale);

  friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
  friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
  friend DenseTensor operator*(double s, DenseTensor a) { return a *= s; }
  friend DenseTensor operator*(DenseTensor a, double s) { return a *= s; }

  bool operator==(const DenseTensor&) const = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// Mode-k unfolding, n_k x (N / n_k). Column j is the mode-k fiber whose
/// remaining indices, taken in increasing mode order with the lowest mode
/// varying fastest, enumerate to j.
Matrix unfold(const DenseTensor& t, std::size_t mode);
Matrix unfold(std::span<const double> data, const Shape& shape, std::size_t mode);

/// Inverse of unfold.
DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape);
void fold_into(const Matrix& m, std::size_t mode, const Shape& shape, std::span<double> out);

double inner(const DenseTensor& a, const DenseTensor& b);
double frobenius(const DenseTensor& t);

/// t x_k U, where U has n_k columns. The result has dimension U.rows() on mode k.
DenseTensor mode_product(const DenseTensor& t, const Matrix& u, std::size_t mode);

struct MultilinearRank {
  std::vector<std::size_t> ranks;
  bool operator==(const MultilinearRank&) const = default;
};

struct TuckerSpec {
  Shape shape;
  std::vector<std::size_t> ranks;
};

/// Tensor C x_1 U1 ... x_K UK with a standard Gaussian core and factors with
/// orthonormal columns obtained from QR of Gaussian matrices.
DenseTensor tucker_random(const TuckerSpec& spec, std::uint64_t seed);
DenseTensor tucker_random(const TuckerSpec& spec, std::mt19937_64& rng);

DenseTensor gaussian_tensor(const Shape& shape, std::mt19937_64& rng);

/// Counts singular values of each unfolding above tol * sigma_max.
MultilinearRank multilinear_rank(const DenseTensor& t, double tol = 1e-8);

/// Weights of all ones.
std::vector<double> unit_weights(const Shape& shape);
/// Weights 1 / sqrt(n_k).
std::vector<double> dimension_scaled_weights(const Shape& shape);

/// sum_k w_k * ||unfold(t, k)||_tr.
double overlapped_norm(const DenseTensor& t, std::span<const double> mode_weights);

}  // namespace tracenorm
