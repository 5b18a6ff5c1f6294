#include "wasp/differentiators.hpp"

#include <stdexcept>
#include <utility>

#include "wasp/tangent.hpp"

namespace wasp {

DerivativeEstimate fd_differentiator(DifferentiableFunction& f,
                                     const Eigen::VectorXd& x,
                                     double epsilon) {
  DerivativeEstimate out;
  out.d = fd_full_jacobian(f, x, epsilon);
  out.iterations = f.input_dim();
  out.calls = f.input_dim() + 1;
  return out;
}

DerivativeEstimate spsa_differentiator(DifferentiableFunction& f,
                                       const Eigen::VectorXd& x, double c,
                                       std::uint64_t seed) {
  if (!(c > 0.0)) {
    throw std::invalid_argument("spsa_differentiator: c must be positive");
  }
  Rng rng(mix_seed(seed, 0x73707361ull));
  const int n = f.input_dim();
  if (x.size() != n) {
    throw std::invalid_argument("spsa_differentiator: x must have size n");
  }

  Eigen::VectorXd p(n);
  for (int k = 0; k < n; ++k) p(k) = rng.rademacher();

  const Eigen::VectorXd g =
      (f.eval(x + c * p) - f.eval(x - c * p)) / (2.0 * c);

  DerivativeEstimate out;
  // Entrywise 1/p(k) equals p(k) for Rademacher entries, so the estimate is
  // the outer product g * p^T.
  out.d = g * p.transpose();
  out.iterations = 1;
  out.calls = 2;
  return out;
}

FdDifferentiator::FdDifferentiator(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("FdDifferentiator: epsilon must be positive");
  }
}

DerivativeEstimate FdDifferentiator::next_derivative(DifferentiableFunction& f,
                                                     const Eigen::VectorXd& x) {
  return fd_differentiator(f, x, epsilon_);
}

SpsaDifferentiator::SpsaDifferentiator(std::uint64_t seed, double c)
    : rng_(mix_seed(seed, 0x73707361ull)), c_(c) {
  if (!(c > 0.0)) {
    throw std::invalid_argument("SpsaDifferentiator: c must be positive");
  }
}

DerivativeEstimate SpsaDifferentiator::next_derivative(
    DifferentiableFunction& f, const Eigen::VectorXd& x) {
  const int n = f.input_dim();
  if (x.size() != n) {
    throw std::invalid_argument("SpsaDifferentiator: x must have size n");
  }
  Eigen::VectorXd p(n);
  for (int k = 0; k < n; ++k) p(k) = rng_.rademacher();

  const Eigen::VectorXd g =
      (f.eval(x + c_ * p) - f.eval(x - c_ * p)) / (2.0 * c_);

  DerivativeEstimate out;
  out.d = g * p.transpose();
  out.iterations = 1;
  out.calls = 2;
  return out;
}

WaspDifferentiator::WaspDifferentiator(WaspCache cache, double epsilon)
    : cache_(std::move(cache)), epsilon_(epsilon) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument(
        "WaspDifferentiator: epsilon must be positive");
  }
}

DerivativeEstimate WaspDifferentiator::next_derivative(
    DifferentiableFunction& f, const Eigen::VectorXd& x) {
  return wasp_derivative(f, x, cache_, epsilon_);
}

std::string WaspDifferentiator::name() const {
  return cache_.tangents().kind == TangentKind::kOrthonormal ? "WASP-O"
                                                             : "WASP-NO";
}

std::unique_ptr<SequentialDifferentiator> make_condition(
    const std::string& name, int n, int m, double d_theta, double d_ell,
    std::uint64_t seed, double epsilon, double spsa_c) {
  if (name == "FD") {
    return std::make_unique<FdDifferentiator>(epsilon);
  }
  if (name == "SPSA") {
    return std::make_unique<SpsaDifferentiator>(seed, spsa_c);
  }
  if (name == "WASP-O") {
    return std::make_unique<WaspDifferentiator>(
        WaspCache(make_orthonormal_tangents(n, seed), m, d_theta, d_ell),
        epsilon);
  }
  if (name == "WASP-NO") {
    return std::make_unique<WaspDifferentiator>(
        WaspCache(make_random_tangents(n, seed), m, d_theta, d_ell), epsilon);
  }
  throw std::invalid_argument("make_condition: unknown condition " + name);
}

}  // namespace wasp
