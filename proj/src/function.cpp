#include "wasp/function.hpp"

#include <stdexcept>
#include <utility>

namespace wasp {

Eigen::VectorXd DifferentiableFunction::eval(const Eigen::VectorXd& x) {
  if (x.size() != input_dim()) {
    throw std::invalid_argument(
        "eval: input has size " + std::to_string(x.size()) + ", expected " +
        std::to_string(input_dim()));
  }
  ++calls_;
  Eigen::VectorXd y = evaluate(x);
  if (y.size() != output_dim()) {
    throw std::logic_error(
        "eval: implementation returned size " + std::to_string(y.size()) +
        ", declared output_dim is " + std::to_string(output_dim()));
  }
  return y;
}

LambdaFunction::LambdaFunction(int input_dim, int output_dim, Body body)
    : input_dim_(input_dim), output_dim_(output_dim), body_(std::move(body)) {
  if (input_dim_ <= 0 || output_dim_ <= 0) {
    throw std::invalid_argument("LambdaFunction: dimensions must be positive");
  }
  if (!body_) {
    throw std::invalid_argument("LambdaFunction: body must be callable");
  }
}

JvpResult fd_jvp(DifferentiableFunction& f, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& dx, const Eigen::VectorXd& f_at_x,
                 double epsilon) {
  if (x.size() != f.input_dim() || dx.size() != f.input_dim()) {
    throw std::invalid_argument("fd_jvp: x and dx must have size input_dim");
  }
  if (f_at_x.size() != f.output_dim()) {
    throw std::invalid_argument("fd_jvp: f_at_x must have size output_dim");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("fd_jvp: epsilon must be positive");
  }

  JvpResult out;
  out.tangent = dx;
  out.epsilon = epsilon;
  out.value = (f.eval(x + epsilon * dx) - f_at_x) / epsilon;
  if (!out.value.allFinite()) {
    throw std::runtime_error("fd_jvp: non-finite value at probe point x + " +
                             std::to_string(epsilon) + "*dx");
  }
  return out;
}

Eigen::MatrixXd fd_full_jacobian(DifferentiableFunction& f,
                                 const Eigen::VectorXd& x, double epsilon) {
  const int n = f.input_dim();
  const int m = f.output_dim();
  const Eigen::VectorXd base = f.eval(x);

  Eigen::MatrixXd jac(m, n);
  Eigen::VectorXd axis = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    axis(j) = 1.0;
    jac.col(j) = fd_jvp(f, x, axis, base, epsilon).value;
    axis(j) = 0.0;
  }
  return jac;
}

}  // namespace wasp
