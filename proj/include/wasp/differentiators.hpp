#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "wasp/engine.hpp"
#include "wasp/function.hpp"
#include "wasp/rng.hpp"

namespace wasp {

// Perturbation magnitude for the simultaneous-perturbation estimator. A
// single fixed scale; no gain sequences, since each request estimates one
// derivative rather than driving a stochastic optimizer.
inline constexpr double kDefaultSpsaC = 1e-4;

// One full forward-difference Jacobian: n+1 forward passes, no state.
DerivativeEstimate fd_differentiator(DifferentiableFunction& f,
                                     const Eigen::VectorXd& x,
                                     double epsilon = kDefaultFdEpsilon);

// Simultaneous-perturbation estimate from one antithetic pair: sample a
// Rademacher direction p, probe f(x + c*p) and f(x - c*p), and spread the
// central difference g across columns as d[j][k] = g[j]/p[k]. Exactly 2
// forward passes for any n, m; deterministic per seed.
DerivativeEstimate spsa_differentiator(DifferentiableFunction& f,
                                       const Eigen::VectorXd& x, double c,
                                       std::uint64_t seed);

// Uniform interface over derivative methods applied to a sequence of inputs.
// Implementations may carry state between requests; a given instance serves
// one sequence on one logical thread.
class SequentialDifferentiator {
 public:
  virtual ~SequentialDifferentiator() = default;

  virtual DerivativeEstimate next_derivative(DifferentiableFunction& f,
                                             const Eigen::VectorXd& x) = 0;

  // Condition label used in experiment output.
  virtual std::string name() const = 0;
};

class FdDifferentiator : public SequentialDifferentiator {
 public:
  explicit FdDifferentiator(double epsilon = kDefaultFdEpsilon);

  DerivativeEstimate next_derivative(DifferentiableFunction& f,
                                     const Eigen::VectorXd& x) override;
  std::string name() const override { return "FD"; }

 private:
  double epsilon_;
};

class SpsaDifferentiator : public SequentialDifferentiator {
 public:
  explicit SpsaDifferentiator(std::uint64_t seed, double c = kDefaultSpsaC);

  DerivativeEstimate next_derivative(DifferentiableFunction& f,
                                     const Eigen::VectorXd& x) override;
  std::string name() const override { return "SPSA"; }

 private:
  Rng rng_;
  double c_;
};

// Wraps a WaspCache; requests mutate the cache, so estimates improve (and
// cheapen) along a sequence of nearby inputs.
class WaspDifferentiator : public SequentialDifferentiator {
 public:
  explicit WaspDifferentiator(WaspCache cache,
                              double epsilon = kDefaultFdEpsilon);

  DerivativeEstimate next_derivative(DifferentiableFunction& f,
                                     const Eigen::VectorXd& x) override;
  std::string name() const override;

  WaspCache& cache() { return cache_; }
  const WaspCache& cache() const { return cache_; }

 private:
  WaspCache cache_;
  double epsilon_;
};

// Builds the named experiment condition: "FD", "SPSA", "WASP-O" (orthonormal
// probe directions), or "WASP-NO" (random full-rank probe directions).
// Throws std::invalid_argument for unknown names.
std::unique_ptr<SequentialDifferentiator> make_condition(
    const std::string& name, int n, int m, double d_theta, double d_ell,
    std::uint64_t seed, double epsilon = kDefaultFdEpsilon,
    double spsa_c = kDefaultSpsaC);

}  // namespace wasp
