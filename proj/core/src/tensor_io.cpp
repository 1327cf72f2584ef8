#include "tracenorm/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "tracenorm/error.hpp"

namespace tracenorm {

namespace {

template <typename T>
T to_little_endian(T value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }
}

template <typename T>
void put(std::ostream& out, T value) {
  value = to_little_endian(value);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T)))
    throw FormatError(std::string("truncated tensor file while reading ") + what);
  return to_little_endian(value);
}

}  // namespace

void write_tensor(std::ostream& out, const DenseTensor& t) {
  validate_shape(t.shape());
  out.write(kTensorMagic, 4);
  put<std::uint32_t>(out, kTensorFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(t.order()));
  for (auto n : t.shape()) put<std::uint64_t>(out, static_cast<std::uint64_t>(n));
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(t.data().data()),
              static_cast<std::streamsize>(t.size() * sizeof(double)));
  } else {
    for (double v : t.data()) put<double>(out, v);
  }
  if (!out) throw FormatError("failed to write tensor");
}

DenseTensor read_tensor(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4) throw FormatError("truncated tensor file: missing magic bytes");
  if (std::memcmp(magic, kTensorMagic, 4) != 0) throw FormatError("bad magic bytes, expected TNSR");
  const auto version = get<std::uint32_t>(in, "version");
  if (version != kTensorFormatVersion)
    throw FormatError("unsupported tensor format version " + std::to_string(version));
  const auto order = get<std::uint32_t>(in, "order");
  if (order == 0) throw FormatError("tensor order must be at least 1");
  if (order > 64) throw FormatError("implausible tensor order " + std::to_string(order));
  Shape shape;
  shape.reserve(order);
  std::size_t total = 1;
  for (std::uint32_t k = 0; k < order; ++k) {
    const auto n = get<std::uint64_t>(in, "dimensions");
    if (n == 0) throw FormatError("zero mode dimension");
    if (total > (std::size_t{1} << 40) / n) throw FormatError("tensor too large");
    total *= static_cast<std::size_t>(n);
    shape.push_back(static_cast<std::size_t>(n));
  }
  std::vector<double> data(total);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(total * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(total * sizeof(double)))
    throw FormatError("truncated tensor file: expected " + std::to_string(total) + " values");
  if constexpr (std::endian::native != std::endian::little) {
    for (auto& v : data) v = to_little_endian(v);
  }
  return DenseTensor(std::move(shape), std::move(data));
}

void save_tensor(const std::filesystem::path& path, const DenseTensor& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_tensor(out, t);
}

DenseTensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_tensor(in);
}

}  // namespace tracenorm
