#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "wasp/function.hpp"
#include "wasp/rng.hpp"

namespace wasp {

enum class Axis { kX, kY, kZ };

// One revolute joint: rotate the frame about the given local axis, then
// advance the frame origin by link along the rotated local x axis.
struct ChainJoint {
  Axis axis = Axis::kZ;
  double link = 0.0;  // > 0
};

// Serial sub-chain hanging off the base frame at a fixed offset. The tip of
// each branch is an end-effector.
struct ChainBranch {
  Eigen::Vector3d attach = Eigen::Vector3d::Zero();
  std::vector<ChainJoint> joints;
};

// Articulated rigid-body model with optional floating base. With a floating
// base the first six configuration entries are base translation (x, y, z)
// and base roll/pitch/yaw; branch joints consume the remaining entries in
// branch order.
struct ChainModel {
  bool floating_base = false;
  std::vector<ChainBranch> branches;

  int dof() const;
  int end_effector_count() const { return static_cast<int>(branches.size()); }
};

// World position of every branch tip at configuration q. Throws
// std::invalid_argument if q.size() != model.dof().
std::vector<Eigen::Vector3d> chain_forward_kinematics(const ChainModel& model,
                                                      const Eigen::VectorXd& q);

// Fixed-base single branch in the z = 0 plane: every joint rotates about z.
ChainModel make_planar_chain(const std::vector<double>& link_lengths);

// 24-dof test model: floating base (6 dof), four 3-dof legs at the corners
// of the base body, and one 6-dof arm on top. Five end-effectors.
ChainModel make_branched_chain();

std::string chain_to_json(const ChainModel& model);
ChainModel chain_from_json(const std::string& text);

// Samples a configuration with every coordinate in a moderate range: base
// translation and orientation uniform on [-0.3, 0.3], joint angles uniform
// on [-1, 1]. Used both to plant reachable targets and to draw starts.
Eigen::VectorXd sample_chain_configuration(const ChainModel& model, Rng& rng);

// Residual with one output per end-effector: the Euclidean distance from the
// tip to its target. Zero exactly at a configuration reaching every target.
class ChainResidual : public DifferentiableFunction {
 public:
  ChainResidual(ChainModel model, std::vector<Eigen::Vector3d> targets);

  int input_dim() const override { return model_.dof(); }
  int output_dim() const override {
    return static_cast<int>(targets_.size());
  }

  const ChainModel& model() const { return model_; }
  const std::vector<Eigen::Vector3d>& targets() const { return targets_; }

 private:
  Eigen::VectorXd evaluate(const Eigen::VectorXd& q) override;

  ChainModel model_;
  std::vector<Eigen::Vector3d> targets_;
};

struct ConstraintProblem {
  ChainModel chain;
  std::vector<Eigen::Vector3d> targets;
  ChainResidual residual;
};

// Throws std::invalid_argument unless targets.size() equals the model's
// end-effector count.
ConstraintProblem make_chain_constraint(ChainModel chain,
                                        std::vector<Eigen::Vector3d> targets);

}  // namespace wasp
