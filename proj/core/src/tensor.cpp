#include "tracenorm/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "tracenorm/error.hpp"
#include "tracenorm/linalg.hpp"

namespace tracenorm {

std::size_t element_count(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < shape.size(); ++k) os << (k ? "," : "") << shape[k];
  os << ')';
  return os.str();
}

void validate_shape(const Shape& shape) {
  if (shape.empty()) throw ShapeError("tensor order must be at least 1");
  for (auto n : shape)
    if (n == 0) throw ShapeError("zero mode dimension in shape " + shape_to_string(shape));
}

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)) {
  validate_shape(shape_);
  data_.assign(element_count(shape_), 0.0);
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  validate_shape(shape_);
  if (data_.size() != element_count(shape_))
    throw ShapeError("data length " + std::to_string(data_.size()) + " does not match shape " +
                     shape_to_string(shape_));
}

DenseTensor DenseTensor::from_vector(const Shape& shape, const Vector& v) {
  return DenseTensor(shape, std::vector<double>(v.data(), v.data() + v.size()));
}

namespace {

std::size_t linear_index(const Shape& shape, std::span<const std::size_t> index) {
  if (index.size() != shape.size())
    throw ShapeError("index has " + std::to_string(index.size()) + " entries for order " +
                     std::to_string(shape.size()));
  std::size_t offset = 0;
  std::size_t stride = 1;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (index[k] >= shape[k]) throw ShapeError("index out of range on mode " + std::to_string(k));
    offset += index[k] * stride;
    stride *= shape[k];
  }
  return offset;
}

void require_same_shape(const Shape& a, const Shape& b) {
  if (a != b) throw ShapeError("shape mismatch: " + shape_to_string(a) + " vs " + shape_to_string(b));
}

void require_mode(const Shape& shape, std::size_t mode) {
  if (mode >= shape.size())
    throw ShapeError("mode " + std::to_string(mode) + " out of range for order " +
                     std::to_string(shape.size()));
}

// Sizes of the blocks before and after `mode` in canonical order.
std::pair<std::size_t, std::size_t> outer_sizes(const Shape& shape, std::size_t mode) {
  std::size_t left = 1;
  for (std::size_t j = 0; j < mode; ++j) left *= shape[j];
  std::size_t right = 1;
  for (std::size_t j = mode + 1; j < shape.size(); ++j) right *= shape[j];
  return {left, right};
}

}  // namespace

double& DenseTensor::at(std::span<const std::size_t> index) {
  return data_[linear_index(shape_, index)];
}

double DenseTensor::at(std::span<const std::size_t> index) const {
  return data_[linear_index(shape_, index)];
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  require_same_shape(shape_, other.shape_);
  vec() += other.vec();
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  require_same_shape(shape_, other.shape_);
  vec() -= other.vec();
  return *this;
}

DenseTensor& DenseTensor::operator*=(double scale) {
  vec() *= scale;
  return *this;
}

// With first-index-fastest storage the tensor is a column-major
// left x n_k x right block; entry (a, i, c) sits at a + left * (i + n_k * c)
// and lands in unfolding column a + left * c.
Matrix unfold(std::span<const double> data, const Shape& shape, std::size_t mode) {
  require_mode(shape, mode);
  const std::size_t n = shape[mode];
  if (data.size() != element_count(shape)) throw ShapeError("data length does not match shape");
  const auto [left, right] = outer_sizes(shape, mode);
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(left * right));
  for (std::size_t c = 0; c < right; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      const double* src = data.data() + left * (i + n * c);
      for (std::size_t a = 0; a < left; ++a)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a + left * c)) = src[a];
    }
  }
  return m;
}

Matrix unfold(const DenseTensor& t, std::size_t mode) { return unfold(t.data(), t.shape(), mode); }

void fold_into(const Matrix& m, std::size_t mode, const Shape& shape, std::span<double> out) {
  require_mode(shape, mode);
  const std::size_t n = shape[mode];
  const std::size_t total = element_count(shape);
  if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) * n != total)
    throw ShapeError("matrix " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     " cannot fold on mode " + std::to_string(mode) + " of " + shape_to_string(shape));
  if (out.size() != total) throw ShapeError("output length does not match shape");
  const auto [left, right] = outer_sizes(shape, mode);
  for (std::size_t c = 0; c < right; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double* dst = out.data() + left * (i + n * c);
      for (std::size_t a = 0; a < left; ++a)
        dst[a] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a + left * c));
    }
  }
}

DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape) {
  DenseTensor t(shape);
  fold_into(m, mode, shape, t.data());
  return t;
}

double inner(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a.shape(), b.shape());
  return a.vec().dot(b.vec());
}

double frobenius(const DenseTensor& t) { return t.vec().norm(); }

DenseTensor mode_product(const DenseTensor& t, const Matrix& u, std::size_t mode) {
  require_mode(t.shape(), mode);
  if (static_cast<std::size_t>(u.cols()) != t.dim(mode))
    throw ShapeError("factor has " + std::to_string(u.cols()) + " columns, mode " +
                     std::to_string(mode) + " has dimension " + std::to_string(t.dim(mode)));
  Shape out_shape = t.shape();
  out_shape[mode] = static_cast<std::size_t>(u.rows());
  const Matrix product = u * unfold(t, mode);
  return fold(product, mode, out_shape);
}

DenseTensor gaussian_tensor(const Shape& shape, std::mt19937_64& rng) {
  DenseTensor t(shape);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& v : t.data()) v = normal(rng);
  return t;
}

DenseTensor tucker_random(const TuckerSpec& spec, std::mt19937_64& rng) {
  validate_shape(spec.shape);
  if (spec.ranks.size() != spec.shape.size())
    throw ShapeError("rank vector length does not match tensor order");
  for (std::size_t k = 0; k < spec.shape.size(); ++k) {
    if (spec.ranks[k] == 0) throw ShapeError("Tucker ranks must be positive");
    if (spec.ranks[k] > spec.shape[k])
      throw ShapeError("rank " + std::to_string(spec.ranks[k]) + " exceeds dimension " +
                       std::to_string(spec.shape[k]) + " on mode " + std::to_string(k));
  }
  DenseTensor result = gaussian_tensor(Shape(spec.ranks.begin(), spec.ranks.end()), rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t k = 0; k < spec.shape.size(); ++k) {
    const auto n = static_cast<Eigen::Index>(spec.shape[k]);
    const auto r = static_cast<Eigen::Index>(spec.ranks[k]);
    Matrix g(n, r);
    for (Eigen::Index j = 0; j < r; ++j)
      for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix q = qr.householderQ() * Matrix::Identity(n, r);
    result = mode_product(result, q, k);
  }
  return result;
}

DenseTensor tucker_random(const TuckerSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return tucker_random(spec, rng);
}

MultilinearRank multilinear_rank(const DenseTensor& t, double tol) {
  MultilinearRank out;
  out.ranks.reserve(t.order());
  for (std::size_t k = 0; k < t.order(); ++k) {
    const Vector s = singular_values(unfold(t, k));
    std::size_t r = 0;
    if (s.size() > 0 && s(0) > 0.0) {
      const double cutoff = tol * s(0);
      for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cutoff) ++r;
    }
    out.ranks.push_back(r);
  }
  return out;
}

std::vector<double> unit_weights(const Shape& shape) { return std::vector<double>(shape.size(), 1.0); }

std::vector<double> dimension_scaled_weights(const Shape& shape) {
  std::vector<double> w;
  w.reserve(shape.size());
  for (auto n : shape) w.push_back(1.0 / std::sqrt(static_cast<double>(n)));
  return w;
}

double overlapped_norm(const DenseTensor& t, std::span<const double> mode_weights) {
  if (mode_weights.size() != t.order())
    throw ShapeError("need one weight per mode");
  double total = 0.0;
  for (std::size_t k = 0; k < t.order(); ++k) total += mode_weights[k] * trace_norm(unfold(t, k));
  return total;
}

}  // namespace tracenorm
