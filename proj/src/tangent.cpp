#include "wasp/tangent.hpp"

#include <stdexcept>

#include <Eigen/SVD>

#include "wasp/rng.hpp"

namespace wasp {

namespace {

Eigen::MatrixXd uniform_square(int n, Rng& rng) {
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      m(r, c) = rng.uniform(-1.0, 1.0);
    }
  }
  return m;
}

}  // namespace

TangentMatrix make_orthonormal_tangents(int n, std::uint64_t seed) {
  if (n < 1) {
    throw std::invalid_argument("make_orthonormal_tangents: n must be >= 1");
  }
  Rng rng(mix_seed(seed, 0x7a6e67656e74ull));
  for (;;) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(uniform_square(n, rng),
                                       Eigen::ComputeFullU);
    // A uniform draw is singular with probability zero; re-sample on the
    // measure-zero failure rather than returning a defective factor.
    if (svd.singularValues().minCoeff() <= 1e-10) continue;
    return TangentMatrix{svd.matrixU(), TangentKind::kOrthonormal, seed};
  }
}

TangentMatrix make_random_tangents(int n, std::uint64_t seed) {
  if (n < 1) {
    throw std::invalid_argument("make_random_tangents: n must be >= 1");
  }
  Rng rng(mix_seed(seed, 0x72616e64ull));
  for (;;) {
    Eigen::MatrixXd m = uniform_square(n, rng);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    if (svd.singularValues().minCoeff() <= 1e-6) continue;
    return TangentMatrix{std::move(m), TangentKind::kRandomFullRank, seed};
  }
}

}  // namespace wasp
