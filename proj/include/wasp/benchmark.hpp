#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wasp/function.hpp"

namespace wasp {

enum class BenchOp { kSin, kCos };

// Recipe for one output of the benchmark family: the recurrence
//   v_0 = x[indices[0]]
//   v_t = ops[t-1](weights[t-1] * v_{t-1} + x[indices[t]])   t = 1..o
// with the output being v_o. Sizes: ops and weights hold o entries,
// indices holds o+1 (0-based input indices).
struct OutputRecipe {
  std::vector<BenchOp> ops;
  std::vector<int> indices;
  std::vector<double> weights;
};

// Smooth synthetic test family: m outputs, each a depth-o composition of
// sines and cosines over n inputs with weights in [-2, 2]. Outputs are
// bounded in [-1, 1] and infinitely differentiable, and the exact Jacobian
// is available by forward accumulation through the recurrence.
struct BenchmarkSpec {
  int n = 0;
  int m = 0;
  int o = 0;
  std::uint64_t seed = 0;
  std::vector<OutputRecipe> outputs;  // size m
};

// Samples a full recipe: ops fair-coin, indices uniform on {0..n-1}, weights
// uniform on [-2, 2]. Deterministic per (n, m, o, seed).
BenchmarkSpec make_benchmark_spec(int n, int m, int o, std::uint64_t seed);

// Serialized form carries (n, m, o, seed) only; the recipe is resampled on
// parse, so hand-edited recipes do not survive a round trip.
std::string benchmark_spec_to_json(const BenchmarkSpec& spec);
BenchmarkSpec benchmark_spec_from_json(const std::string& text);

class BenchmarkFunction : public DifferentiableFunction {
 public:
  // Throws std::invalid_argument if the recipe sizes are inconsistent or any
  // index is out of range.
  explicit BenchmarkFunction(BenchmarkSpec spec);

  int input_dim() const override { return spec_.n; }
  int output_dim() const override { return spec_.m; }
  const BenchmarkSpec& spec() const { return spec_; }

 private:
  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) override;

  BenchmarkSpec spec_;
};

inline BenchmarkFunction make_benchmark(BenchmarkSpec spec) {
  return BenchmarkFunction(std::move(spec));
}

// Exact m x n Jacobian of the benchmark at x, by the chain rule through the
// recurrence. Ground truth for error metrics.
Eigen::MatrixXd benchmark_analytic_jacobian(const BenchmarkSpec& spec,
                                            const Eigen::VectorXd& x);

// Sequence of inputs for derivative sweeps: a fixed-step random walk.
struct RandomWalk {
  std::vector<Eigen::VectorXd> waypoints;
  double lambda = 0.0;
  std::uint64_t seed = 0;
};

// x_0 has i.i.d. entries uniform on [-1, 1]; each subsequent waypoint moves
// by exactly lambda along an independent uniformly random unit direction.
RandomWalk make_random_walk(int n, int w, double lambda, std::uint64_t seed);

// Mean over rows of the angle between estimate row and truth row. A row pair
// where both norms are below 1e-12 contributes 0; exactly one near-zero row
// contributes pi/2.
double angular_error(const Eigen::MatrixXd& estimate,
                     const Eigen::MatrixXd& truth);

// Mean over rows of | ||estimate row|| - ||truth row|| | / max(||truth row||,
// 1e-12).
double norm_error(const Eigen::MatrixXd& estimate,
                  const Eigen::MatrixXd& truth);

}  // namespace wasp
