#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "wkam/minplus.hpp"

namespace wkam {

namespace {

constexpr std::array<char, 5> kMagic{'W', 'K', 'A', 'M', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  os.write(b.data(), 4);
}

void put_f64(std::ostream& os, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  os.write(b.data(), 8);
}

std::uint32_t get_u32(std::istream& is) {
  std::array<unsigned char, 4> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 4)) throw Error(ErrorCode::kIo, "truncated kernel cache");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  std::array<unsigned char, 8> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 8)) throw Error(ErrorCode::kIo, "truncated kernel cache");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void write_kernel_cache(const std::filesystem::path& path, const ActionKernel& k) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  os.write(kMagic.data(), kMagic.size());
  put_u32(os, static_cast<std::uint32_t>(k.grid().dim()));
  put_u32(os, static_cast<std::uint32_t>(k.grid().n()));
  put_f64(os, k.horizon());
  put_u32(os, static_cast<std::uint32_t>(k.winding()));
  put_u32(os, static_cast<std::uint32_t>(k.substeps()));
  for (double v : k.matrix().entries()) put_f64(os, v);
  if (!os) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

ActionKernel read_kernel_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::array<char, 5> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error(ErrorCode::kIo, path.string() + " is not a WKAM1 kernel cache");
  }
  const auto d = static_cast<int>(get_u32(is));
  const auto n = static_cast<int>(get_u32(is));
  const double t = get_f64(is);
  const auto w = static_cast<int>(get_u32(is));
  const auto m = static_cast<int>(get_u32(is));
  const TorusGrid grid(d, n);
  std::vector<double> entries(grid.size() * grid.size());
  for (double& v : entries) v = get_f64(is);
  if (is.peek() != std::char_traits<char>::eof()) throw Error(ErrorCode::kIo, "trailing bytes in kernel cache");
  return ActionKernel(grid, t, w, m, MinPlusMatrix(grid.size(), std::move(entries)));
}

}  // namespace wkam
