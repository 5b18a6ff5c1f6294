#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "wasp/chain.hpp"
#include "wasp/differentiators.hpp"
#include "wasp/function.hpp"

namespace wasp {

struct SolveReport {
  Eigen::VectorXd x;            // final iterate
  int iterations = 0;           // damped steps taken
  std::uint64_t calls = 0;      // forward passes consumed, engine included
  bool converged = false;       // residual norm reached tol
  double residual_norm = 0.0;   // at the final iterate
  // Residual semantics, recorded so reports are self-describing.
  std::string residual_metric = "euclidean-distance-per-output";
  std::string diagnostic;       // nonempty iff aborted on a numerical failure
};

// Damped Gauss-Newton root search: x <- x - alpha * pinv(J~) * psi(x), where
// J~ is whatever Jacobian estimate the engine produces at x. The
// pseudoinverse is a truncated SVD (singular values below 1e-8 of the
// largest are dropped), so rank-deficient estimates yield a least-squares
// step instead of a blow-up.
//
// Stops as converged the first time ||psi(x)|| <= tol; gives up after
// max_iters steps; aborts with a diagnostic if an iterate, residual, or
// Jacobian estimate goes non-finite. calls counts every forward pass of
// psi, including the engine's probes.
SolveReport pseudoinverse_solve(DifferentiableFunction& psi,
                                const Eigen::VectorXd& x0,
                                SequentialDifferentiator& engine,
                                double alpha = 0.1, double tol = 1e-4,
                                int max_iters = 10000);

SolveReport pseudoinverse_solve(ConstraintProblem& problem,
                                const Eigen::VectorXd& x0,
                                SequentialDifferentiator& engine,
                                double alpha = 0.1, double tol = 1e-4,
                                int max_iters = 10000);

}  // namespace wasp
