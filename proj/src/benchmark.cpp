#include "wasp/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "wasp/rng.hpp"

namespace wasp {

namespace {

void check_spec(const BenchmarkSpec& spec) {
  if (spec.n < 1 || spec.m < 1 || spec.o < 1) {
    throw std::invalid_argument("BenchmarkSpec: n, m, o must be >= 1");
  }
  if (static_cast<int>(spec.outputs.size()) != spec.m) {
    throw std::invalid_argument("BenchmarkSpec: outputs must have m entries");
  }
  for (const OutputRecipe& r : spec.outputs) {
    const auto o = static_cast<std::size_t>(spec.o);
    if (r.ops.size() != o || r.weights.size() != o ||
        r.indices.size() != o + 1) {
      throw std::invalid_argument("BenchmarkSpec: recipe sizes inconsistent");
    }
    for (int idx : r.indices) {
      if (idx < 0 || idx >= spec.n) {
        throw std::invalid_argument("BenchmarkSpec: index out of range");
      }
    }
  }
}

double apply_op(BenchOp op, double u) {
  return op == BenchOp::kSin ? std::sin(u) : std::cos(u);
}

double apply_op_derivative(BenchOp op, double u) {
  return op == BenchOp::kSin ? std::cos(u) : -std::sin(u);
}

}  // namespace

BenchmarkSpec make_benchmark_spec(int n, int m, int o, std::uint64_t seed) {
  if (n < 1 || m < 1 || o < 1) {
    throw std::invalid_argument("make_benchmark_spec: n, m, o must be >= 1");
  }
  BenchmarkSpec spec;
  spec.n = n;
  spec.m = m;
  spec.o = o;
  spec.seed = seed;
  spec.outputs.resize(m);

  Rng rng(mix_seed(seed, 0x62656e6368ull));
  for (OutputRecipe& r : spec.outputs) {
    r.ops.resize(o);
    r.weights.resize(o);
    r.indices.resize(o + 1);
    r.indices[0] = static_cast<int>(rng.index(n));
    for (int t = 0; t < o; ++t) {
      r.ops[t] = (rng.bits() & 1ull) ? BenchOp::kCos : BenchOp::kSin;
      r.indices[t + 1] = static_cast<int>(rng.index(n));
      r.weights[t] = rng.uniform(-2.0, 2.0);
    }
  }
  return spec;
}

std::string benchmark_spec_to_json(const BenchmarkSpec& spec) {
  nlohmann::json j;
  j["n"] = spec.n;
  j["m"] = spec.m;
  j["o"] = spec.o;
  j["seed"] = spec.seed;
  return j.dump();
}

BenchmarkSpec benchmark_spec_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  return make_benchmark_spec(j.at("n").get<int>(), j.at("m").get<int>(),
                             j.at("o").get<int>(),
                             j.at("seed").get<std::uint64_t>());
}

BenchmarkFunction::BenchmarkFunction(BenchmarkSpec spec)
    : spec_(std::move(spec)) {
  check_spec(spec_);
}

Eigen::VectorXd BenchmarkFunction::evaluate(const Eigen::VectorXd& x) {
  Eigen::VectorXd y(spec_.m);
  for (int j = 0; j < spec_.m; ++j) {
    const OutputRecipe& r = spec_.outputs[j];
    double v = x(r.indices[0]);
    for (int t = 0; t < spec_.o; ++t) {
      v = apply_op(r.ops[t], r.weights[t] * v + x(r.indices[t + 1]));
    }
    y(j) = v;
  }
  return y;
}

Eigen::MatrixXd benchmark_analytic_jacobian(const BenchmarkSpec& spec,
                                            const Eigen::VectorXd& x) {
  check_spec(spec);
  if (x.size() != spec.n) {
    throw std::invalid_argument(
        "benchmark_analytic_jacobian: x must have size n");
  }
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(spec.m, spec.n);
  Eigen::VectorXd g(spec.n);
  for (int j = 0; j < spec.m; ++j) {
    const OutputRecipe& r = spec.outputs[j];
    g.setZero();
    g(r.indices[0]) = 1.0;
    double v = x(r.indices[0]);
    for (int t = 0; t < spec.o; ++t) {
      const double u = r.weights[t] * v + x(r.indices[t + 1]);
      const double d = apply_op_derivative(r.ops[t], u);
      g *= d * r.weights[t];
      g(r.indices[t + 1]) += d;
      v = apply_op(r.ops[t], u);
    }
    jac.row(j) = g.transpose();
  }
  return jac;
}

RandomWalk make_random_walk(int n, int w, double lambda, std::uint64_t seed) {
  if (n < 1 || w < 1) {
    throw std::invalid_argument("make_random_walk: n and w must be >= 1");
  }
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("make_random_walk: lambda must be >= 0");
  }
  Rng rng(mix_seed(seed, 0x77616c6bull));
  RandomWalk walk;
  walk.lambda = lambda;
  walk.seed = seed;
  walk.waypoints.reserve(w);

  Eigen::VectorXd x(n);
  for (int k = 0; k < n; ++k) x(k) = rng.uniform(-1.0, 1.0);
  walk.waypoints.push_back(x);

  Eigen::VectorXd step(n);
  for (int k = 1; k < w; ++k) {
    // A Gaussian draw is re-sampled in the measure-zero case where its norm
    // underflows, so normalization is always well defined.
    do {
      for (int d = 0; d < n; ++d) step(d) = rng.normal();
    } while (step.norm() < 1e-300);
    x += lambda * step / step.norm();
    walk.waypoints.push_back(x);
  }
  return walk;
}

double angular_error(const Eigen::MatrixXd& estimate,
                     const Eigen::MatrixXd& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw std::invalid_argument("angular_error: shape mismatch");
  }
  const double kPi = 3.14159265358979323846;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < estimate.rows(); ++j) {
    const double ne = estimate.row(j).norm();
    const double nt = truth.row(j).norm();
    if (ne < 1e-12 && nt < 1e-12) {
      continue;  // both effectively zero: no direction to compare
    }
    if (ne < 1e-12 || nt < 1e-12) {
      sum += kPi / 2.0;
      continue;
    }
    const double cosine =
        std::clamp(estimate.row(j).dot(truth.row(j)) / (ne * nt), -1.0, 1.0);
    sum += std::acos(cosine);
  }
  return sum / static_cast<double>(estimate.rows());
}

double norm_error(const Eigen::MatrixXd& estimate,
                  const Eigen::MatrixXd& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw std::invalid_argument("norm_error: shape mismatch");
  }
  double sum = 0.0;
  for (Eigen::Index j = 0; j < estimate.rows(); ++j) {
    const double ne = estimate.row(j).norm();
    const double nt = truth.row(j).norm();
    sum += std::abs(ne - nt) / std::max(nt, 1e-12);
  }
  return sum / static_cast<double>(estimate.rows());
}

}  // namespace wasp
