#pragma once

#include <vector>

#include <Eigen/Core>

#include "wasp/function.hpp"
#include "wasp/tangent.hpp"

namespace wasp {

// Result of one derivative request.
struct DerivativeEstimate {
  Eigen::MatrixXd d;   // m x n estimate of the Jacobian at x
  int iterations = 0;  // corrective loops used, 1 <= iterations <= n
  int calls = 0;       // forward passes consumed, always iterations + 1
};

// State carried across the derivative requests of one input sequence.
//
// The cache owns the probe directions (columns of delta_x), the most recent
// directional-derivative estimates along each of them (columns of web), and
// the per-direction solve matrices c1/c2 that turn one fresh directional
// derivative plus the stored web into a full Jacobian estimate in two matrix
// products. c1/c2 depend only on delta_x and are computed once here, from a
// single factorization of A = 2*delta_x*delta_x^T.
//
// One cache serves one sequence on one logical thread. Caches may move
// between threads but must never be shared concurrently; independent
// sequences should each hold their own cache.
class WaspCache {
 public:
  // Throws std::invalid_argument if delta_x is not square full-rank, if
  // output_dim < 1, or if a threshold is not positive (+infinity is allowed
  // and makes every acceptance check pass).
  WaspCache(TangentMatrix delta_x, int output_dim, double d_theta,
            double d_ell);

  // Rebuilds a cache from checkpointed state: a previously stored web and
  // direction cursor instead of the zero-web fresh start.
  static WaspCache from_state(TangentMatrix delta_x, Eigen::MatrixXd web,
                              int direction, double d_theta, double d_ell);

  int input_dim() const { return static_cast<int>(delta_x_.data.cols()); }
  int output_dim() const { return static_cast<int>(web_.rows()); }
  double d_theta() const { return d_theta_; }
  double d_ell() const { return d_ell_; }

  const TangentMatrix& tangents() const { return delta_x_; }
  const Eigen::MatrixXd& web() const { return web_; }

  // Direction index (0-based) the next corrective iteration will probe. The
  // cursor advances cyclically after every iteration, so every direction is
  // refreshed at least once per input_dim() iterations.
  int direction() const { return dir_; }

  const Eigen::MatrixXd& c1(int i) const { return c1_[i]; }
  const Eigen::VectorXd& c2(int i) const { return c2_[i]; }

  // Diagnostics for the final iteration of the most recent derivative
  // request: which direction it probed and the measured directional
  // derivative. last_direction() is -1 until the first request completes.
  int last_direction() const { return last_dir_; }
  const Eigen::VectorXd& last_jvp() const { return last_jvp_; }

 private:
  friend DerivativeEstimate wasp_derivative(DifferentiableFunction& f,
                                            const Eigen::VectorXd& x,
                                            WaspCache& cache, double epsilon);

  TangentMatrix delta_x_;
  Eigen::MatrixXd web_;
  std::vector<Eigen::MatrixXd> c1_;
  std::vector<Eigen::VectorXd> c2_;
  int dir_ = 0;
  double d_theta_;
  double d_ell_;
  int last_dir_ = -1;
  Eigen::VectorXd last_jvp_;
};

// Acceptance test between a stored estimate a and a fresh measurement b.
// True iff the angle between them is at most d_theta and the relative norm
// discrepancy |‖a‖ − ‖b‖| / max(‖b‖, 1e-12) is at most d_ell. The angle is
// defined as 0 when either vector has norm below 1e-12, so near-zero vectors
// are judged by the norm test alone.
bool close_enough(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                  double d_theta, double d_ell);

// Estimates the full Jacobian of f at x, reusing the cache built by previous
// requests. Evaluates f(x) once, then runs corrective iterations: measure the
// directional derivative along the cache's current direction, test it against
// the stored column with close_enough, store it, and re-solve for the
// Jacobian whose action on delta_x matches the updated web. The loop stops at
// the first accepted check, or after input_dim() iterations, at which point
// every column holds a fresh measurement and the estimate equals the full
// forward-difference Jacobian along the cached directions.
//
// The re-solve runs even on an accepted iteration (the measurement is already
// paid for), so the returned estimate always reproduces the final measured
// directional derivative exactly and cache.web() always equals d * delta_x.
DerivativeEstimate wasp_derivative(DifferentiableFunction& f,
                                   const Eigen::VectorXd& x, WaspCache& cache,
                                   double epsilon = kDefaultFdEpsilon);

// Reference solution of the same constrained re-solve, assembled and
// factorized directly from its optimality system instead of the cached c1/c2
// path. Returns the Jacobian estimate together with the multipliers of the
// equality constraint. Slow; intended for verification.
struct KktSolution {
  Eigen::MatrixXd d;       // m x n
  Eigen::VectorXd lambda;  // m
};
KktSolution kkt_oracle(const TangentMatrix& delta_x, const Eigen::MatrixXd& web,
                       int i, const Eigen::VectorXd& delta_f_i);

}  // namespace wasp
