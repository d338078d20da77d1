#pragma once

#include <vector>

#include "pnav/geom.hpp"
#include "pnav/registration.hpp"

namespace pnav::handeye {

/// One calibration sample: the robot TCP pose in the base frame paired with
/// the tracked reference-tool reading. The fixed tool offset between TCP
/// and reference tool is the latent parameter the AX=XB step eliminates.
struct PosePair {
  geom::RigidTransform robot_tcp;    // base -> TCP
  geom::RigidTransform tracker_ref;  // reference tool -> tracker, as measured
};

/// Relative-motion pair A = tcp_2 * tcp_1^-1, B = ref_2^-1 * ref_1.
struct MotionPair {
  geom::RigidTransform a;
  geom::RigidTransform b;
};

struct SolveOptions {
  /// Motions with a rotation below this angle have an undefined axis and
  /// are dropped before solving.
  double min_rotation_rad = 1e-6;
  /// A and B of one motion must rotate by the same angle; a larger gap
  /// marks the pair as an outlier and drops it.
  double max_angle_mismatch_rad = 5.0 * geom::kPi / 180.0;
  /// Below this smallest singular value of the stacked axis system the
  /// pose set did not vary enough and the solution is flagged.
  double conditioning_min_singular_value = 1e-3;
};

struct AxxbSolution {
  geom::RigidTransform x;  // base -> tracker
  double rotation_residual_deg = 0.0;    // RMS of angle(A_i X, X B_i)
  double translation_residual_mm = 0.0;  // RMS of the stage-2 linear residual
  int motions_used = 0;
  int dropped_small_rotation = 0;
  int dropped_angle_mismatch = 0;
  double min_singular_value = 0.0;
  bool poorly_conditioned = false;
};

/// Builds motion pairs from consecutive pose pairs (or every ordered pair
/// when all_pairs is set). Throws InsufficientData below 2 pose pairs.
std::vector<MotionPair> make_motion_pairs(const std::vector<PosePair>& pairs, bool all_pairs = false);

/// Tsai's two-stage least-squares solution of A_i X = X B_i: the rotation
/// from the stacked skew-symmetric axis system, then the translation from
/// the stacked (R_A - I) system. Throws DegenerateMotion when fewer than
/// two usable motions remain or every usable rotation axis is parallel.
AxxbSolution solve_axxb(const std::vector<MotionPair>& motions, const SolveOptions& options = {});

/// RMSE of Eq-style marker residuals: tracker-frame marker positions are
/// mapped into the robot frame through x and compared with the robot-frame
/// reference positions, matched by name.
double rmse_e2h(const registration::FiducialSet& markers_tracker,
                const registration::FiducialSet& markers_robot, const geom::RigidTransform& x);

}  // namespace pnav::handeye
