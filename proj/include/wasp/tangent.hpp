#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace wasp {

enum class TangentKind { kOrthonormal, kRandomFullRank };

// Square matrix of probe directions; column i is the direction used for the
// i-th web update. Instances are immutable after construction and safe to
// share across threads.
struct TangentMatrix {
  Eigen::MatrixXd data;  // n x n, full rank
  TangentKind kind = TangentKind::kOrthonormal;
  std::uint64_t seed = 0;

  int dim() const { return static_cast<int>(data.cols()); }
  Eigen::VectorXd direction(int i) const { return data.col(i); }
};

// Orthonormal directions: the left singular factor of a seeded n x n matrix
// with i.i.d. entries uniform on [-1, 1]. Deterministic per (n, seed);
// degenerate draws are re-sampled.
TangentMatrix make_orthonormal_tangents(int n, std::uint64_t seed);

// Raw uniform [-1, 1] entries, re-sampled until the smallest singular value
// exceeds 1e-6. Columns are neither unit length nor mutually orthogonal in
// general.
TangentMatrix make_random_tangents(int n, std::uint64_t seed);

}  // namespace wasp
