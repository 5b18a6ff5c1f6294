#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Core>

namespace wasp {

// Step length used by forward-difference probes unless the caller overrides it.
inline constexpr double kDefaultFdEpsilon = 1e-6;

// A deterministic map R^n -> R^m with a forward-pass counter. eval() is the
// only entry point that touches the counter, so call_count() is exactly the
// number of forward passes since construction or the last reset.
class DifferentiableFunction {
 public:
  virtual ~DifferentiableFunction() = default;

  virtual int input_dim() const = 0;
  virtual int output_dim() const = 0;

  // Evaluates the map. Throws std::invalid_argument if x.size() != input_dim()
  // and std::logic_error if the implementation returns the wrong output size.
  Eigen::VectorXd eval(const Eigen::VectorXd& x);

  std::uint64_t call_count() const { return calls_; }
  void reset_call_count() { calls_ = 0; }

 private:
  virtual Eigen::VectorXd evaluate(const Eigen::VectorXd& x) = 0;

  std::uint64_t calls_ = 0;
};

// Adapts a callable to the counted interface.
class LambdaFunction : public DifferentiableFunction {
 public:
  using Body = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  LambdaFunction(int input_dim, int output_dim, Body body);

  int input_dim() const override { return input_dim_; }
  int output_dim() const override { return output_dim_; }

 private:
  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) override { return body_(x); }

  int input_dim_;
  int output_dim_;
  Body body_;
};

// One forward-difference directional derivative.
struct JvpResult {
  Eigen::VectorXd tangent;  // probe direction dx
  Eigen::VectorXd value;    // (f(x + eps*dx) - f(x)) / eps
  double epsilon = kDefaultFdEpsilon;
};

// Computes a forward-difference JVP reusing a caller-supplied base value, so
// the cost is exactly one forward pass. Throws std::invalid_argument on
// dimension mismatches or a non-positive epsilon, std::runtime_error if the
// probe produces a non-finite value.
JvpResult fd_jvp(DifferentiableFunction& f, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& dx, const Eigen::VectorXd& f_at_x,
                 double epsilon = kDefaultFdEpsilon);

// Full m-by-n forward-difference Jacobian estimate: one base pass plus one
// probe per coordinate axis, n+1 forward passes total.
Eigen::MatrixXd fd_full_jacobian(DifferentiableFunction& f,
                                 const Eigen::VectorXd& x,
                                 double epsilon = kDefaultFdEpsilon);

}  // namespace wasp
