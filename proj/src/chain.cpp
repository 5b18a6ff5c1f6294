#include "wasp/chain.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include <Eigen/Geometry>

namespace wasp {

namespace {

Eigen::Vector3d axis_vector(Axis axis) {
  switch (axis) {
    case Axis::kX:
      return Eigen::Vector3d::UnitX();
    case Axis::kY:
      return Eigen::Vector3d::UnitY();
    case Axis::kZ:
      return Eigen::Vector3d::UnitZ();
  }
  throw std::logic_error("axis_vector: bad axis");
}

Eigen::Matrix3d rotation_about(Axis axis, double angle) {
  return Eigen::AngleAxisd(angle, axis_vector(axis)).toRotationMatrix();
}

char axis_name(Axis axis) {
  switch (axis) {
    case Axis::kX:
      return 'x';
    case Axis::kY:
      return 'y';
    case Axis::kZ:
      return 'z';
  }
  throw std::logic_error("axis_name: bad axis");
}

Axis axis_from_name(const std::string& name) {
  if (name == "x") return Axis::kX;
  if (name == "y") return Axis::kY;
  if (name == "z") return Axis::kZ;
  throw std::runtime_error("chain_from_json: bad axis '" + name + "'");
}

}  // namespace

int ChainModel::dof() const {
  int total = floating_base ? 6 : 0;
  for (const ChainBranch& b : branches) {
    total += static_cast<int>(b.joints.size());
  }
  return total;
}

std::vector<Eigen::Vector3d> chain_forward_kinematics(
    const ChainModel& model, const Eigen::VectorXd& q) {
  if (q.size() != model.dof()) {
    throw std::invalid_argument(
        "chain_forward_kinematics: q has size " + std::to_string(q.size()) +
        ", model has " + std::to_string(model.dof()) + " dof");
  }

  Eigen::Vector3d base_p = Eigen::Vector3d::Zero();
  Eigen::Matrix3d base_r = Eigen::Matrix3d::Identity();
  int k = 0;
  if (model.floating_base) {
    base_p = q.segment<3>(0);
    base_r = rotation_about(Axis::kZ, q(5)) * rotation_about(Axis::kY, q(4)) *
             rotation_about(Axis::kX, q(3));
    k = 6;
  }

  std::vector<Eigen::Vector3d> tips;
  tips.reserve(model.branches.size());
  for (const ChainBranch& b : model.branches) {
    Eigen::Vector3d p = base_p + base_r * b.attach;
    Eigen::Matrix3d r = base_r;
    for (const ChainJoint& joint : b.joints) {
      r = r * rotation_about(joint.axis, q(k++));
      p += r * Eigen::Vector3d(joint.link, 0.0, 0.0);
    }
    tips.push_back(p);
  }
  return tips;
}

ChainModel make_planar_chain(const std::vector<double>& link_lengths) {
  if (link_lengths.empty()) {
    throw std::invalid_argument("make_planar_chain: need at least one link");
  }
  ChainBranch branch;
  for (double len : link_lengths) {
    if (!(len > 0.0)) {
      throw std::invalid_argument(
          "make_planar_chain: link lengths must be positive");
    }
    branch.joints.push_back({Axis::kZ, len});
  }
  ChainModel model;
  model.branches.push_back(std::move(branch));
  return model;
}

ChainModel make_branched_chain() {
  ChainModel model;
  model.floating_base = true;

  const double leg_x = 0.3;
  const double leg_y = 0.2;
  for (double sx : {1.0, -1.0}) {
    for (double sy : {1.0, -1.0}) {
      ChainBranch leg;
      leg.attach = Eigen::Vector3d(sx * leg_x, sy * leg_y, 0.0);
      leg.joints = {{Axis::kZ, 0.10}, {Axis::kY, 0.35}, {Axis::kY, 0.35}};
      model.branches.push_back(std::move(leg));
    }
  }

  ChainBranch arm;
  arm.attach = Eigen::Vector3d(0.0, 0.0, 0.1);
  arm.joints = {{Axis::kZ, 0.10}, {Axis::kY, 0.30}, {Axis::kY, 0.30},
                {Axis::kX, 0.10}, {Axis::kY, 0.10}, {Axis::kX, 0.10}};
  model.branches.push_back(std::move(arm));

  return model;
}

std::string chain_to_json(const ChainModel& model) {
  nlohmann::json j;
  j["floating_base"] = model.floating_base;
  j["branches"] = nlohmann::json::array();
  for (const ChainBranch& b : model.branches) {
    nlohmann::json jb;
    jb["attach"] = {b.attach.x(), b.attach.y(), b.attach.z()};
    jb["joints"] = nlohmann::json::array();
    for (const ChainJoint& joint : b.joints) {
      jb["joints"].push_back({{"axis", std::string(1, axis_name(joint.axis))},
                              {"link", joint.link}});
    }
    j["branches"].push_back(std::move(jb));
  }
  return j.dump(2);
}

ChainModel chain_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ChainModel model;
  model.floating_base = j.at("floating_base").get<bool>();
  for (const nlohmann::json& jb : j.at("branches")) {
    ChainBranch b;
    const auto& attach = jb.at("attach");
    if (attach.size() != 3) {
      throw std::runtime_error("chain_from_json: attach must have 3 entries");
    }
    b.attach = Eigen::Vector3d(attach[0].get<double>(),
                               attach[1].get<double>(),
                               attach[2].get<double>());
    for (const nlohmann::json& jj : jb.at("joints")) {
      ChainJoint joint;
      joint.axis = axis_from_name(jj.at("axis").get<std::string>());
      joint.link = jj.at("link").get<double>();
      if (!(joint.link > 0.0)) {
        throw std::runtime_error("chain_from_json: link must be positive");
      }
      b.joints.push_back(joint);
    }
    model.branches.push_back(std::move(b));
  }
  return model;
}

Eigen::VectorXd sample_chain_configuration(const ChainModel& model, Rng& rng) {
  Eigen::VectorXd q(model.dof());
  int k = 0;
  if (model.floating_base) {
    for (; k < 6; ++k) q(k) = rng.uniform(-0.3, 0.3);
  }
  for (; k < model.dof(); ++k) q(k) = rng.uniform(-1.0, 1.0);
  return q;
}

ChainResidual::ChainResidual(ChainModel model,
                             std::vector<Eigen::Vector3d> targets)
    : model_(std::move(model)), targets_(std::move(targets)) {
  if (static_cast<int>(targets_.size()) != model_.end_effector_count()) {
    throw std::invalid_argument(
        "ChainResidual: one target per end-effector required");
  }
  if (model_.dof() < 1) {
    throw std::invalid_argument("ChainResidual: model has no joints");
  }
}

Eigen::VectorXd ChainResidual::evaluate(const Eigen::VectorXd& q) {
  const std::vector<Eigen::Vector3d> tips =
      chain_forward_kinematics(model_, q);
  Eigen::VectorXd psi(targets_.size());
  for (std::size_t j = 0; j < targets_.size(); ++j) {
    psi(static_cast<Eigen::Index>(j)) = (tips[j] - targets_[j]).norm();
  }
  return psi;
}

ConstraintProblem make_chain_constraint(ChainModel chain,
                                        std::vector<Eigen::Vector3d> targets) {
  ChainResidual residual(chain, targets);
  return ConstraintProblem{std::move(chain), std::move(targets),
                           std::move(residual)};
}

}  // namespace wasp
