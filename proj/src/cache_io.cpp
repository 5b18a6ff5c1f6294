#include "wasp/cache_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "cache blobs are little-endian; big-endian hosts need byte "
              "swapping that is not implemented");

namespace wasp {

namespace {

constexpr char kMagic[8] = {'W', 'A', 'S', 'P', 'C', 'A', 'C', 'H'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("load_cache: truncated stream");
  return v;
}

void put_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      put(out, m(r, c));
    }
  }
}

Eigen::MatrixXd get_matrix(std::istream& in, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      m(r, c) = get<double>(in);
    }
  }
  return m;
}

}  // namespace

void save_cache(const WaspCache& cache, std::ostream& out) {
  out.write(kMagic, sizeof(kMagic));
  put(out, kVersion);
  put(out, static_cast<std::uint32_t>(cache.input_dim()));
  put(out, static_cast<std::uint32_t>(cache.output_dim()));
  put(out, static_cast<std::uint32_t>(cache.direction()));
  put(out, static_cast<std::uint32_t>(cache.tangents().kind));
  put(out, static_cast<std::uint64_t>(cache.tangents().seed));
  put(out, cache.d_theta());
  put(out, cache.d_ell());
  put_matrix(out, cache.tangents().data);
  put_matrix(out, cache.web());
  if (!out) throw std::runtime_error("save_cache: write failed");
}

void save_cache(const WaspCache& cache, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_cache: cannot open " + path);
  save_cache(cache, out);
}

WaspCache load_cache(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("load_cache: bad magic");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) {
    throw std::runtime_error("load_cache: unsupported version " +
                             std::to_string(version));
  }
  const auto n = get<std::uint32_t>(in);
  const auto m = get<std::uint32_t>(in);
  const auto direction = get<std::uint32_t>(in);
  const auto kind = get<std::uint32_t>(in);
  const auto seed = get<std::uint64_t>(in);
  const double d_theta = get<double>(in);
  const double d_ell = get<double>(in);
  if (n < 1 || n > (1u << 20) || m < 1 || m > (1u << 20) || direction >= n ||
      kind > 1) {
    throw std::runtime_error("load_cache: corrupt header");
  }

  TangentMatrix tangents;
  tangents.data = get_matrix(in, static_cast<int>(n), static_cast<int>(n));
  tangents.kind =
      kind == 0 ? TangentKind::kOrthonormal : TangentKind::kRandomFullRank;
  tangents.seed = seed;
  Eigen::MatrixXd web =
      get_matrix(in, static_cast<int>(m), static_cast<int>(n));

  return WaspCache::from_state(std::move(tangents), std::move(web),
                               static_cast<int>(direction), d_theta, d_ell);
}

WaspCache load_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_cache: cannot open " + path);
  return load_cache(in);
}

}  // namespace wasp
