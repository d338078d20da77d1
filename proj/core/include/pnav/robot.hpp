#pragma once

#include <vector>

#include "pnav/geom.hpp"

namespace pnav::robot {

/// One revolute joint: a fixed transform from the previous frame (offset in
/// mm plus zero-pose rotation) followed by rotation of the joint angle
/// about `axis` expressed in the joint's own frame.
struct Joint {
  geom::Vec3 axis = geom::Vec3::UnitZ();        // unit
  geom::Vec3 offset_mm = geom::Vec3::Zero();    // from previous joint frame
  Eigen::Matrix3d zero_rotation = Eigen::Matrix3d::Identity();
};

/// Serial chain of revolute joints with a TCP offset. Immutable after
/// construction; FK and Jacobian are pure functions of (chain, q).
class KinematicChain {
public:
  KinematicChain(std::vector<Joint> joints, geom::RigidTransform tcp_offset);

  /// Generic 7-DoF arm with alternating z/y axes and link lengths along z,
  /// standing in for the serial manipulator; any chain with a valid J(q)
  /// serves the toolkit equally.
  static KinematicChain default_7dof();

  std::size_t size() const { return joints_.size(); }
  const std::vector<Joint>& joints() const { return joints_; }
  const geom::RigidTransform& tcp_offset() const { return tcp_offset_; }

private:
  std::vector<Joint> joints_;
  geom::RigidTransform tcp_offset_;
};

struct JointState {
  Eigen::VectorXd q;     // rad
  Eigen::VectorXd qdot;  // rad/s, may be empty when unused

  explicit JointState(Eigen::VectorXd q_in) : q(std::move(q_in)) {}
  JointState(Eigen::VectorXd q_in, Eigen::VectorXd qdot_in) : q(std::move(q_in)), qdot(std::move(qdot_in)) {}
};

/// TCP pose in the base frame. Throws DimensionMismatch if q length does
/// not equal the joint count.
geom::RigidTransform forward_kinematics(const KinematicChain& chain, const Eigen::VectorXd& q);
inline geom::RigidTransform forward_kinematics(const KinematicChain& chain, const JointState& state) {
  return forward_kinematics(chain, state.q);
}

/// Geometric Jacobian, 6 x n. Rows 0-2 linear (mm/rad), rows 3-5 angular
/// (rad/rad); column i is (z_i x (p_tcp - p_i), z_i) in the base frame.
Eigen::Matrix<double, 6, Eigen::Dynamic> geometric_jacobian(const KinematicChain& chain,
                                                            const Eigen::VectorXd& q);

/// tau = J^T F. Wrench is (force N, torque N*mm); torques come out in N*mm.
Eigen::VectorXd torques_from_wrench(const Eigen::Matrix<double, 6, Eigen::Dynamic>& j,
                                    const geom::Vec6& wrench);

}  // namespace pnav::robot
