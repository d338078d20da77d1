#include "pnav/handeye.hpp"

#include <cmath>

namespace pnav::handeye {

namespace {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

struct UsableMotion {
  Eigen::Vector3d p_a;  // 2 sin(theta/2) * axis of A
  Eigen::Vector3d p_b;
  Eigen::Vector3d axis_a;
  const MotionPair* pair;
};

}  // namespace

std::vector<MotionPair> make_motion_pairs(const std::vector<PosePair>& pairs, bool all_pairs) {
  if (pairs.size() < 2)
    throw InsufficientData("hand-eye calibration needs >= 2 pose pairs, got " + std::to_string(pairs.size()));

  std::vector<MotionPair> motions;
  auto emit = [&](const PosePair& p1, const PosePair& p2) {
    motions.push_back({compose(p2.robot_tcp, invert(p1.robot_tcp)),
                       compose(invert(p2.tracker_ref), p1.tracker_ref)});
  };

  if (all_pairs) {
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t j = i + 1; j < pairs.size(); ++j) emit(pairs[i], pairs[j]);
  } else {
    for (std::size_t i = 0; i + 1 < pairs.size(); ++i) emit(pairs[i], pairs[i + 1]);
  }
  return motions;
}

AxxbSolution solve_axxb(const std::vector<MotionPair>& motions, const SolveOptions& options) {
  AxxbSolution out;

  std::vector<UsableMotion> usable;
  usable.reserve(motions.size());
  for (const auto& m : motions) {
    const Eigen::AngleAxisd aa_a(m.a.rotation());
    const Eigen::AngleAxisd aa_b(m.b.rotation());
    if (aa_a.angle() < options.min_rotation_rad || aa_b.angle() < options.min_rotation_rad) {
      ++out.dropped_small_rotation;
      continue;
    }
    if (std::abs(aa_a.angle() - aa_b.angle()) > options.max_angle_mismatch_rad) {
      ++out.dropped_angle_mismatch;
      continue;
    }
    UsableMotion u;
    u.p_a = 2.0 * std::sin(aa_a.angle() / 2.0) * aa_a.axis();
    u.p_b = 2.0 * std::sin(aa_b.angle() / 2.0) * aa_b.axis();
    u.axis_a = aa_a.axis();
    u.pair = &m;
    usable.push_back(u);
  }

  if (usable.size() < 2)
    throw DegenerateMotion("need >= 2 motions with well-defined rotations, only " +
                           std::to_string(usable.size()) + " usable of " + std::to_string(motions.size()));

  // Rotation is observable only with two distinct axis directions.
  double max_line_angle = 0.0;
  for (std::size_t i = 1; i < usable.size(); ++i) {
    const double s = usable[0].axis_a.cross(usable[i].axis_a).norm();
    max_line_angle = std::max(max_line_angle, std::asin(std::min(1.0, s)));
  }
  if (max_line_angle < 1e-6)
    throw DegenerateMotion("all motion rotation axes are parallel; rotation is unobservable");

  const int n = static_cast<int>(usable.size());

  // Stage 1: skew(p_a + p_b) p' = p_b - p_a, p' = tan(theta_x/2) * axis_x.
  Eigen::MatrixXd lhs_rot(3 * n, 3);
  Eigen::VectorXd rhs_rot(3 * n);
  for (int i = 0; i < n; ++i) {
    lhs_rot.middleRows<3>(3 * i) = skew(usable[i].p_a + usable[i].p_b);
    rhs_rot.segment<3>(3 * i) = usable[i].p_b - usable[i].p_a;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_rot(lhs_rot, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.min_singular_value = svd_rot.singularValues().minCoeff();
  out.poorly_conditioned = out.min_singular_value < options.conditioning_min_singular_value;
  const Eigen::Vector3d p_prime = svd_rot.solve(rhs_rot);

  const double w = 1.0 / std::sqrt(1.0 + p_prime.squaredNorm());
  const Eigen::Quaterniond q_x(w, w * p_prime.x(), w * p_prime.y(), w * p_prime.z());
  const Eigen::Matrix3d r_x = q_x.toRotationMatrix();

  // Stage 2: (R_A - I) t_x = R_X t_B - t_A.
  Eigen::MatrixXd lhs_t(3 * n, 3);
  Eigen::VectorXd rhs_t(3 * n);
  for (int i = 0; i < n; ++i) {
    lhs_t.middleRows<3>(3 * i) = usable[i].pair->a.rotation() - Eigen::Matrix3d::Identity();
    rhs_t.segment<3>(3 * i) = r_x * usable[i].pair->b.translation() - usable[i].pair->a.translation();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_t(lhs_t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Vector3d t_x = svd_t.solve(rhs_t);

  out.x = geom::RigidTransform(geom::orthonormalize(r_x), t_x);
  out.motions_used = n;

  double rot_ss = 0.0, trans_ss = 0.0;
  for (const auto& u : usable) {
    rot_ss += std::pow(geom::rotation_distance_deg(compose(u.pair->a, out.x), compose(out.x, u.pair->b)), 2);
    trans_ss += ((u.pair->a.rotation() - Eigen::Matrix3d::Identity()) * t_x -
                 (r_x * u.pair->b.translation() - u.pair->a.translation()))
                    .squaredNorm();
  }
  out.rotation_residual_deg = std::sqrt(rot_ss / n);
  out.translation_residual_mm = std::sqrt(trans_ss / n);
  return out;
}

double rmse_e2h(const registration::FiducialSet& markers_tracker,
                const registration::FiducialSet& markers_robot, const geom::RigidTransform& x) {
  // E_m = ||robot_m - X * tracker_m||, which is rmse_fiducials with the
  // robot-frame positions as reference.
  return registration::rmse_fiducials(markers_robot, markers_tracker, x);
}

}  // namespace pnav::handeye
