#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "wasp/chain.hpp"
#include "wasp/differentiators.hpp"
#include "wasp/root_finding.hpp"

using wasp::ChainModel;
using wasp::ConstraintProblem;
using wasp::LambdaFunction;
using wasp::SolveReport;

TEST_CASE("one-link planar chain reaches its own forward kinematics") {
  const ChainModel model = wasp::make_planar_chain({1.0});
  CHECK(model.dof() == 1);
  CHECK(model.end_effector_count() == 1);

  Eigen::VectorXd q(1);
  q << 0.7;
  const auto tips = wasp::chain_forward_kinematics(model, q);
  CHECK(tips[0].x() == doctest::Approx(std::cos(0.7)).epsilon(1e-15));
  CHECK(tips[0].y() == doctest::Approx(std::sin(0.7)).epsilon(1e-15));
  CHECK(tips[0].z() == 0.0);

  ConstraintProblem problem =
      wasp::make_chain_constraint(model, {tips[0]});
  CHECK(problem.residual.eval(q)(0) == 0.0);
}

TEST_CASE("forward kinematics validates the configuration size") {
  const ChainModel model = wasp::make_planar_chain({0.5, 0.5});
  CHECK_THROWS_AS(wasp::chain_forward_kinematics(model, Eigen::Vector3d::Zero()),
                  std::invalid_argument);
}

TEST_CASE("branched chain has 24 dof and 5 end-effectors") {
  const ChainModel model = wasp::make_branched_chain();
  CHECK(model.dof() == 24);
  CHECK(model.end_effector_count() == 5);

  // planted root: targets from a sampled configuration give zero residual
  wasp::Rng rng(7);
  const Eigen::VectorXd q_star = wasp::sample_chain_configuration(model, rng);
  const auto targets = wasp::chain_forward_kinematics(model, q_star);
  ConstraintProblem problem = wasp::make_chain_constraint(model, targets);
  CHECK(problem.residual.eval(q_star).cwiseAbs().maxCoeff() < 1e-14);

  // ...and a different configuration does not
  const Eigen::VectorXd q_other = wasp::sample_chain_configuration(model, rng);
  CHECK(problem.residual.eval(q_other).norm() > 1e-3);
}

TEST_CASE("sampled configurations respect the documented ranges") {
  const ChainModel model = wasp::make_branched_chain();
  wasp::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd q = wasp::sample_chain_configuration(model, rng);
    CHECK(q.head(6).cwiseAbs().maxCoeff() <= 0.3);
    CHECK(q.tail(18).cwiseAbs().maxCoeff() <= 1.0);
  }
}

TEST_CASE("chain JSON round trip preserves kinematics") {
  const ChainModel model = wasp::make_branched_chain();
  const ChainModel back = wasp::chain_from_json(wasp::chain_to_json(model));
  CHECK(back.dof() == model.dof());
  CHECK(back.floating_base == model.floating_base);
  CHECK(back.end_effector_count() == model.end_effector_count());

  wasp::Rng rng(11);
  const Eigen::VectorXd q = wasp::sample_chain_configuration(model, rng);
  const auto tips_a = wasp::chain_forward_kinematics(model, q);
  const auto tips_b = wasp::chain_forward_kinematics(back, q);
  for (std::size_t j = 0; j < tips_a.size(); ++j) {
    CHECK((tips_a[j] - tips_b[j]).norm() == 0.0);
  }

  CHECK_THROWS_AS(wasp::chain_from_json("{\"floating_base\":true}"),
                  std::exception);
}

TEST_CASE("constraint construction rejects target count mismatches") {
  const ChainModel model = wasp::make_planar_chain({1.0});
  CHECK_THROWS_AS(
      wasp::make_chain_constraint(
          model, {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()}),
      std::invalid_argument);
}

TEST_CASE("linear residual with alpha=1 solves in one step to the least-norm root") {
  Eigen::MatrixXd b(2, 4);
  b << 1.0, 0.5, -0.2, 0.0, 0.0, 1.5, 0.3, -1.0;
  const Eigen::VectorXd rhs = Eigen::Vector2d(0.9, -0.4);
  LambdaFunction psi(4, 2,
                     [b, rhs](const Eigen::VectorXd& x) { return b * x - rhs; });

  wasp::FdDifferentiator engine;
  const SolveReport report = wasp::pseudoinverse_solve(
      psi, Eigen::VectorXd::Zero(4), engine, 1.0, 1e-9, 10);

  CHECK(report.converged);
  CHECK(report.iterations == 1);

  // least-norm solution via the pseudoinverse of b
  const Eigen::VectorXd least_norm =
      b.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  CHECK((report.x - least_norm).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("an already-satisfying start terminates with zero iterations") {
  const ChainModel model = wasp::make_planar_chain({1.0, 0.8});
  Eigen::VectorXd q(2);
  q << 0.3, -0.5;
  const auto tips = wasp::chain_forward_kinematics(model, q);

  for (const char* name : {"FD", "SPSA", "WASP-O", "WASP-NO"}) {
    ConstraintProblem problem = wasp::make_chain_constraint(model, tips);
    auto engine = wasp::make_condition(name, 2, 1, 0.1, 0.1, 5);
    const SolveReport report =
        wasp::pseudoinverse_solve(problem, q, *engine, 0.1, 1e-4, 100);
    CHECK(report.converged);
    CHECK(report.iterations == 0);
    CHECK(report.calls == 1);  // the single convergence check
    CHECK(report.x == q);
  }
}

TEST_CASE("two-link planar chain: both engines converge, fewer passes with caching") {
  const ChainModel model = wasp::make_planar_chain({1.0, 0.8});
  Eigen::VectorXd q_goal(2);
  q_goal << 0.9, -0.4;
  const auto targets = wasp::chain_forward_kinematics(model, q_goal);
  const Eigen::VectorXd x0 = Eigen::Vector2d(0.1, 0.1);

  ConstraintProblem fd_problem = wasp::make_chain_constraint(model, targets);
  wasp::FdDifferentiator fd_engine;
  const SolveReport fd_report = wasp::pseudoinverse_solve(
      fd_problem, x0, fd_engine, 0.1, 1e-6, 5000);

  ConstraintProblem wasp_problem = wasp::make_chain_constraint(model, targets);
  auto wasp_engine = wasp::make_condition("WASP-O", 2, 1, 0.1, 0.1, 5);
  const SolveReport wasp_report = wasp::pseudoinverse_solve(
      wasp_problem, x0, *wasp_engine, 0.1, 1e-6, 5000);

  CHECK(fd_report.converged);
  CHECK(wasp_report.converged);
  CHECK(wasp_report.calls < fd_report.calls);
}

TEST_CASE("unreachable target reports non-convergence at the cap") {
  const ChainModel model = wasp::make_planar_chain({1.0});
  ConstraintProblem problem = wasp::make_chain_constraint(
      model, {Eigen::Vector3d(3.0, 0.0, 0.0)});
  wasp::FdDifferentiator engine;
  const SolveReport report = wasp::pseudoinverse_solve(
      problem, Eigen::VectorXd::Zero(1), engine, 0.1, 1e-4, 200);

  CHECK_FALSE(report.converged);
  CHECK(report.iterations == 200);
  CHECK(report.residual_norm > 1.999);  // reach is 1, target at 3
  CHECK(report.diagnostic.empty());
}

TEST_CASE("zero jacobian yields a null step, not a blow-up") {
  LambdaFunction psi(2, 1, [](const Eigen::VectorXd&) {
    return Eigen::VectorXd::Constant(1, 1.0);
  });
  wasp::FdDifferentiator engine;
  const SolveReport report = wasp::pseudoinverse_solve(
      psi, Eigen::Vector2d(0.4, -0.2), engine, 0.5, 1e-4, 25);
  CHECK_FALSE(report.converged);
  CHECK(report.x == Eigen::Vector2d(0.4, -0.2));
  CHECK(report.diagnostic.empty());
}

TEST_CASE("non-finite residual aborts with a diagnostic") {
  LambdaFunction psi(1, 1, [](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(1);
    y(0) = x(0) < 0.0 ? std::numeric_limits<double>::quiet_NaN()
                      : x(0) + 1.0;
    return y;
  });
  wasp::FdDifferentiator engine;
  const SolveReport report = wasp::pseudoinverse_solve(
      psi, Eigen::VectorXd::Constant(1, 0.5), engine, 1.0, 1e-9, 50);
  CHECK_FALSE(report.converged);
  CHECK_FALSE(report.diagnostic.empty());
}

TEST_CASE("solver parameter validation") {
  LambdaFunction psi(1, 1, [](const Eigen::VectorXd& x) { return x; });
  wasp::FdDifferentiator engine;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Ones(1);
  CHECK_THROWS_AS(wasp::pseudoinverse_solve(psi, x0, engine, 0.0, 1e-4, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(wasp::pseudoinverse_solve(psi, x0, engine, 1.5, 1e-4, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(wasp::pseudoinverse_solve(psi, x0, engine, 0.1, 0.0, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(wasp::pseudoinverse_solve(psi, x0, engine, 0.1, 1e-4, -1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      wasp::pseudoinverse_solve(psi, Eigen::Vector2d::Zero(), engine, 0.1,
                                1e-4, 10),
      std::invalid_argument);
}
