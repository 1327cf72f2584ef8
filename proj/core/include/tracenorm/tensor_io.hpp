#pragma once

#include <filesystem>
#include <iosfwd>

#include "tracenorm/tensor.hpp"

namespace tracenorm {

// Binary layout: "TNSR", u32 version (=1), u32 K, K x u64 dims, then N
// little-endian IEEE-754 doubles in canonical order.
inline constexpr char kTensorMagic[4] = {'T', 'N', 'S', 'R'};
inline constexpr std::uint32_t kTensorFormatVersion = 1;

void write_tensor(std::ostream& out, const DenseTensor& t);
DenseTensor read_tensor(std::istream& in);

void save_tensor(const std::filesystem::path& path, const DenseTensor& t);
DenseTensor load_tensor(const std::filesystem::path& path);

}  // namespace tracenorm
