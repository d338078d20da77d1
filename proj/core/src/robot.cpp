#include "pnav/robot.hpp"

namespace pnav::robot {

KinematicChain::KinematicChain(std::vector<Joint> joints, geom::RigidTransform tcp_offset)
    : joints_(std::move(joints)), tcp_offset_(std::move(tcp_offset)) {
  if (joints_.empty() || joints_.size() > 16)
    throw DimensionMismatch("chain must have 1..16 joints, got " + std::to_string(joints_.size()));
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    if (std::abs(joints_[i].axis.norm() - 1.0) > geom::kOrthonormalTol)
      throw DegenerateGeometry("joint " + std::to_string(i) + " axis is not unit-norm");
    if (!joints_[i].offset_mm.allFinite())
      throw DegenerateGeometry("joint " + std::to_string(i) + " offset is not finite");
  }
}

KinematicChain KinematicChain::default_7dof() {
  const double lengths[7] = {340.0, 0.0, 400.0, 0.0, 400.0, 0.0, 126.0};
  std::vector<Joint> joints(7);
  for (int i = 0; i < 7; ++i) {
    joints[i].axis = (i % 2 == 0) ? geom::Vec3::UnitZ() : geom::Vec3::UnitY();
    joints[i].offset_mm = geom::Vec3(0.0, 0.0, lengths[i]);
  }
  return KinematicChain(std::move(joints), geom::RigidTransform::translation({0.0, 0.0, 100.0}));
}

namespace {

void check_dims(const KinematicChain& chain, const Eigen::VectorXd& q) {
  if (static_cast<std::size_t>(q.size()) != chain.size())
    throw DimensionMismatch("joint vector has " + std::to_string(q.size()) + " entries for a " +
                            std::to_string(chain.size()) + "-joint chain");
  if (!q.allFinite()) throw DimensionMismatch("joint vector has non-finite entries");
}

}  // namespace

geom::RigidTransform forward_kinematics(const KinematicChain& chain, const Eigen::VectorXd& q) {
  check_dims(chain, q);
  geom::RigidTransform pose;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const Joint& j = chain.joints()[i];
    pose = compose(pose, geom::RigidTransform(j.zero_rotation, j.offset_mm));
    pose = compose(pose, geom::RigidTransform::about_axis(j.axis, q(static_cast<int>(i))));
  }
  return compose(pose, chain.tcp_offset());
}

Eigen::Matrix<double, 6, Eigen::Dynamic> geometric_jacobian(const KinematicChain& chain,
                                                            const Eigen::VectorXd& q) {
  check_dims(chain, q);
  const int n = static_cast<int>(chain.size());

  // Joint frame origins and axes in the base frame, then one pass for the
  // columns once p_tcp is known.
  std::vector<Eigen::Vector3d> axis_base(n), origin_base(n);
  geom::RigidTransform pose;
  for (int i = 0; i < n; ++i) {
    const Joint& j = chain.joints()[i];
    pose = compose(pose, geom::RigidTransform(j.zero_rotation, j.offset_mm));
    axis_base[i] = pose.rotation() * j.axis;
    origin_base[i] = pose.translation();
    pose = compose(pose, geom::RigidTransform::about_axis(j.axis, q(i)));
  }
  const Eigen::Vector3d p_tcp = compose(pose, chain.tcp_offset()).translation();

  Eigen::Matrix<double, 6, Eigen::Dynamic> jac(6, n);
  for (int i = 0; i < n; ++i) {
    jac.col(i).head<3>() = axis_base[i].cross(p_tcp - origin_base[i]);
    jac.col(i).tail<3>() = axis_base[i];
  }
  return jac;
}

Eigen::VectorXd torques_from_wrench(const Eigen::Matrix<double, 6, Eigen::Dynamic>& j,
                                    const geom::Vec6& wrench) {
  if (!wrench.allFinite()) throw DimensionMismatch("wrench has non-finite entries");
  return j.transpose() * wrench;
}

}  // namespace pnav::robot
