#include "wasp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace wasp {

namespace {

void check_thresholds(double d_theta, double d_ell) {
  // NaN fails both comparisons; +infinity passes and is a valid
  // accept-always configuration.
  if (!(d_theta > 0.0) || !(d_ell > 0.0)) {
    throw std::invalid_argument("WaspCache: thresholds must be positive");
  }
}

}  // namespace

WaspCache::WaspCache(TangentMatrix delta_x, int output_dim, double d_theta,
                     double d_ell)
    : delta_x_(std::move(delta_x)), d_theta_(d_theta), d_ell_(d_ell) {
  check_thresholds(d_theta, d_ell);
  const Eigen::MatrixXd& dx = delta_x_.data;
  const int n = static_cast<int>(dx.cols());
  if (n < 1 || dx.rows() != n) {
    throw std::invalid_argument("WaspCache: delta_x must be square, n >= 1");
  }
  if (output_dim < 1) {
    throw std::invalid_argument("WaspCache: output_dim must be >= 1");
  }

  const Eigen::MatrixXd a = 2.0 * dx * dx.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(
        "WaspCache: 2*delta_x*delta_x^T is not positive definite; delta_x is "
        "rank deficient");
  }
  const Eigen::MatrixXd a_inv =
      llt.solve(Eigen::MatrixXd::Identity(n, n));

  c1_.reserve(n);
  c2_.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd h = a_inv * dx.col(i);
    const double s = dx.col(i).dot(h);
    // s = dx_i^T A^{-1} dx_i > 0 whenever A is positive definite and
    // dx_i != 0, both established above.
    c1_.push_back((a_inv - (h * h.transpose()) / s) * (2.0 * dx));
    c2_.push_back(h / s);
  }

  web_ = Eigen::MatrixXd::Zero(output_dim, n);
  last_jvp_ = Eigen::VectorXd::Zero(output_dim);
}

WaspCache WaspCache::from_state(TangentMatrix delta_x, Eigen::MatrixXd web,
                                int direction, double d_theta, double d_ell) {
  const int m = static_cast<int>(web.rows());
  WaspCache cache(std::move(delta_x), m, d_theta, d_ell);
  if (web.cols() != cache.input_dim()) {
    throw std::invalid_argument("from_state: web must be m x n");
  }
  if (!web.allFinite()) {
    throw std::invalid_argument("from_state: web must be finite");
  }
  if (direction < 0 || direction >= cache.input_dim()) {
    throw std::invalid_argument("from_state: direction out of range");
  }
  cache.web_ = std::move(web);
  cache.dir_ = direction;
  return cache;
}

bool close_enough(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                  double d_theta, double d_ell) {
  const double na = a.norm();
  const double nb = b.norm();
  double angle = 0.0;
  if (na >= 1e-12 && nb >= 1e-12) {
    angle = std::acos(std::clamp(a.dot(b) / (na * nb), -1.0, 1.0));
  }
  const double discrepancy = std::abs(na - nb) / std::max(nb, 1e-12);
  return angle <= d_theta && discrepancy <= d_ell;
}

DerivativeEstimate wasp_derivative(DifferentiableFunction& f,
                                   const Eigen::VectorXd& x, WaspCache& cache,
                                   double epsilon) {
  const int n = cache.input_dim();
  const int m = cache.output_dim();
  if (f.input_dim() != n || f.output_dim() != m) {
    throw std::invalid_argument(
        "wasp_derivative: function dimensions do not match cache");
  }

  const Eigen::VectorXd base = f.eval(x);
  const Eigen::MatrixXd& dx = cache.delta_x_.data;

  DerivativeEstimate out;
  out.d.resize(m, n);
  bool accepted = false;
  do {
    ++out.iterations;
    const int i = cache.dir_;
    const JvpResult probe = fd_jvp(f, x, dx.col(i), base, epsilon);

    accepted = close_enough(cache.web_.col(i), probe.value, cache.d_theta_,
                            cache.d_ell_);

    cache.web_.col(i) = probe.value;
    out.d.noalias() = cache.web_ * cache.c1_[i].transpose();
    out.d.noalias() += probe.value * cache.c2_[i].transpose();
    cache.web_.noalias() = out.d * dx;

    cache.last_dir_ = i;
    cache.last_jvp_ = probe.value;
    cache.dir_ = (i + 1) % n;
  } while (!accepted && out.iterations < n);

  out.calls = out.iterations + 1;
  return out;
}

KktSolution kkt_oracle(const TangentMatrix& delta_x, const Eigen::MatrixXd& web,
                       int i, const Eigen::VectorXd& delta_f_i) {
  const Eigen::MatrixXd& dx = delta_x.data;
  const int n = static_cast<int>(dx.cols());
  const int m = static_cast<int>(web.rows());
  if (dx.rows() != n || web.cols() != n || delta_f_i.size() != m || i < 0 ||
      i >= n) {
    throw std::invalid_argument("kkt_oracle: inconsistent dimensions");
  }

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
  kkt.topLeftCorner(n, n) = 2.0 * dx * dx.transpose();
  kkt.topRightCorner(n, 1) = -dx.col(i);
  kkt.bottomLeftCorner(1, n) = dx.col(i).transpose();

  Eigen::MatrixXd rhs(n + 1, m);
  rhs.topRows(n) = 2.0 * dx * web.transpose();
  rhs.bottomRows(1) = delta_f_i.transpose();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("kkt_oracle: singular system");
  }
  const Eigen::MatrixXd sol = lu.solve(rhs);

  KktSolution out;
  out.d = sol.topRows(n).transpose();
  out.lambda = sol.bottomRows(1).transpose();
  return out;
}

}  // namespace wasp
