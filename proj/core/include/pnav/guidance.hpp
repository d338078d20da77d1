#pragma once

#include <cstdint>
#include <vector>

#include "pnav/geom.hpp"
#include "pnav/metrics.hpp"
#include "pnav/rng.hpp"

namespace pnav::guidance {

using geom::Mat6;
using geom::Vec6;

/// Controller state: GravityCompensation renders zero task force (free
/// manipulation), Stiffened applies the spring-damper law.
enum class ControlMode { GravityCompensation, Stiffened };

/// Diagonal Cartesian impedance. Stiffness is N/m on the translational
/// entries and N*m/rad on the rotational ones; `basis` rotates the
/// translational/rotational diagonals out of their eigenframe (identity
/// for axis-aligned stiffness).
struct ImpedanceParams {
  Vec6 stiffness = Vec6::Zero();
  Vec6 damping = Vec6::Zero();
  double zeta = 0.707;
  ControlMode mode = ControlMode::Stiffened;
  Eigen::Matrix3d basis = Eigen::Matrix3d::Identity();
};

/// The pre-planned insertion line: origin (mm) plus unit direction.
struct FixtureFrame {
  geom::Point3 origin_mm = geom::Point3::Zero();
  geom::Vec3 axis = geom::Vec3::UnitZ();  // unit insertion direction
};

/// Simulated Cartesian plant state: pose as position (mm) stacked on an
/// orientation rotation-vector (rad), plus the matching velocity.
struct SimState {
  Vec6 x = Vec6::Zero();
  Vec6 v = Vec6::Zero();
  double t_s = 0.0;
};

/// Critical damping law D_ii = 2 zeta sqrt(K_ii m_ii); with unit effective
/// mass this is the plain 2 zeta sqrt(K).
Vec6 critical_damping(const Vec6& stiffness, double zeta, const Vec6& m_eff = Vec6::Ones());

struct FixtureStiffness {
  Vec6 fixture_diag = Vec6::Zero();              // in fixture coordinates, axis slot is zero
  Eigen::Matrix3d to_base = Eigen::Matrix3d::Identity();  // fixture basis -> base

  /// Stiffness as a base-frame 6x6 (block diagonal).
  Mat6 in_base() const;
};

/// Virtual-fixture stiffness: zero along the insertion axis, `lateral`
/// on the two orthogonal directions, isotropic rotational stiffness.
FixtureStiffness fixture_stiffness(const FixtureFrame& frame, double lateral_n_per_m = 4000.0,
                                   double rotational_nm_per_rad = 200.0);

/// Pose error x_des - x_msr: translational difference plus the rotation
/// vector of the relative rotation (restoring sign).
Vec6 pose_error(const Vec6& x_des, const Vec6& x_msr);

/// Spring-damper wrench F = K x_err + D (-v), with mm -> m conversion on
/// the translational rows so the result is (N, N*m). Identically zero in
/// GravityCompensation mode.
Vec6 impedance_force(const Vec6& x_des, const Vec6& x_msr, const Vec6& v, const ImpedanceParams& p);

/// One semi-implicit Euler step: v += M^-1 (f_op + f_ctrl) dt, x += v dt.
/// m_eff is (kg, kg*m^2) diagonal; forces in (N, N*m); dt must lie in
/// (0, 0.01] s or InvalidTimestep is thrown.
SimState step_dynamics(const SimState& s, const Vec6& f_operator, const Vec6& f_controller,
                       const Vec6& m_eff, double dt_s);

/// Synthetic human operator: a hand spring-damper servoing the needle
/// toward the operator's *perceived* goal pose, with band-limited tremor
/// on the goal. Perception offsets model the visualization modality;
/// insertion drift is the uncorrected heading bias of manual insertion.
/// All values are assumptions, echoed into reports.
struct OperatorModel {
  double intent_speed_mm_s = 10.0;
  double tremor_sd_mm = 2.0;
  double tremor_rot_sd_deg = 0.2;
  double tremor_cutoff_hz = 2.0;
  double perception_lat_sd_mm = 1.0;   // alignment residual, lateral
  double perception_rot_sd_deg = 0.5;  // alignment residual, angular
  double insertion_drift_sd_deg = 0.0; // manual-mode heading bias during puncture
  double hand_stiffness_n_per_m = 300.0;
  double hand_rot_stiffness_nm_per_rad = 4.0;
  double align_overhead_mean_s = 60.0;  // human deliberation time, not simulated
  double align_overhead_sd_s = 10.0;
};

struct InsertionSetup {
  FixtureFrame path;
  double planned_length_mm = 80.0;
  double lateral_stiffness_n_per_m = 4000.0;
  double rot_stiffness_nm_per_rad = 200.0;
  double zeta = 0.707;
  Vec6 m_eff = (Vec6() << 1.0, 1.0, 1.0, 0.01, 0.01, 0.01).finished();
  double dt_s = 0.001;
  double align_thresh_lat_mm = 1.0;
  double align_thresh_rot_deg = 0.5;
  double max_align_time_s = 60.0;
  double max_settle_time_s = 30.0;
  bool record_trajectory = false;
};

struct InsertionOutcome {
  std::vector<SimState> trajectory;  // empty unless record_trajectory
  metrics::TrialResult result;
  double align_sim_time_s = 0.0;
  double insertion_sim_time_s = 0.0;
  bool align_timed_out = false;
};

/// Runs the alignment phase followed by the puncture phase under the given
/// modality: guided modes (SG, AG) stiffen the robot at the aligned pose
/// and constrain motion to the needle line, manual modes (SM, AM) keep the
/// controller in gravity compensation throughout. Deterministic for a
/// fixed seed.
InsertionOutcome simulate_insertion(metrics::Modality mode, const InsertionSetup& setup,
                                    const OperatorModel& op, std::uint64_t seed);

}  // namespace pnav::guidance
