#include "wasp/root_finding.hpp"

#include <stdexcept>

#include <Eigen/SVD>

namespace wasp {

namespace {

// pinv(j) * v with singular values below 1e-8 of the largest treated as 0.
Eigen::VectorXd pseudoinverse_apply(const Eigen::MatrixXd& j,
                                    const Eigen::VectorXd& v) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(
      j, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = 1e-8 * (sigma.size() > 0 ? sigma(0) : 0.0);

  Eigen::VectorXd coeffs = svd.matrixU().transpose() * v;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    coeffs(i) = sigma(i) > cutoff ? coeffs(i) / sigma(i) : 0.0;
  }
  return svd.matrixV() * coeffs;
}

}  // namespace

SolveReport pseudoinverse_solve(DifferentiableFunction& psi,
                                const Eigen::VectorXd& x0,
                                SequentialDifferentiator& engine, double alpha,
                                double tol, int max_iters) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::invalid_argument("pseudoinverse_solve: alpha must be in (0,1]");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("pseudoinverse_solve: tol must be positive");
  }
  if (max_iters < 0) {
    throw std::invalid_argument("pseudoinverse_solve: max_iters must be >= 0");
  }
  if (x0.size() != psi.input_dim()) {
    throw std::invalid_argument("pseudoinverse_solve: x0 has wrong size");
  }

  const std::uint64_t calls_at_entry = psi.call_count();
  SolveReport report;
  report.x = x0;

  for (;;) {
    const Eigen::VectorXd value = psi.eval(report.x);
    if (!value.allFinite()) {
      report.diagnostic = "residual went non-finite at iteration " +
                          std::to_string(report.iterations);
      break;
    }
    report.residual_norm = value.norm();
    if (report.residual_norm <= tol) {
      report.converged = true;
      break;
    }
    if (report.iterations >= max_iters) {
      break;
    }

    const DerivativeEstimate estimate =
        engine.next_derivative(psi, report.x);
    if (!estimate.d.allFinite()) {
      report.diagnostic = "Jacobian estimate went non-finite at iteration " +
                          std::to_string(report.iterations);
      break;
    }

    report.x -= alpha * pseudoinverse_apply(estimate.d, value);
    ++report.iterations;
    if (!report.x.allFinite()) {
      report.diagnostic = "iterate went non-finite at iteration " +
                          std::to_string(report.iterations);
      break;
    }
  }

  report.calls = psi.call_count() - calls_at_entry;
  return report;
}

SolveReport pseudoinverse_solve(ConstraintProblem& problem,
                                const Eigen::VectorXd& x0,
                                SequentialDifferentiator& engine, double alpha,
                                double tol, int max_iters) {
  return pseudoinverse_solve(problem.residual, x0, engine, alpha, tol,
                             max_iters);
}

}  // namespace wasp
