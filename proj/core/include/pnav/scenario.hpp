#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pnav/geom.hpp"
#include "pnav/guidance.hpp"
#include "pnav/handeye.hpp"
#include "pnav/metrics.hpp"
#include "pnav/registration.hpp"
#include "pnav/robot.hpp"

namespace pnav::scenario {

/// Noise magnitudes of the synthetic measurement chain. The physical
/// system's noise comes from hardware; here every source is explicit and
/// seeded.
struct NoiseConfig {
  double tracker_pos_sd_mm = 0.25;
  double tracker_rot_sd_deg = 0.05;
  double probe_sd_mm = 0.25;
  double hologram_drift_sd_mm = 1.0;
  double operator_tremor_sd_mm = 2.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Ground truth of one synthetic scene: the coordinate chain, the phantom
/// fiducials on a half-cylinder surface, the QR markers, the ureter
/// vertices and the planned path. Everything downstream is graded against
/// these values.
struct WorldTruth {
  geom::RigidTransform base_from_tracker;   // true X
  geom::RigidTransform base_from_phantom;
  geom::RigidTransform hmd_from_qr;
  geom::RigidTransform hmd_from_phantom;    // derived, used for grading
  geom::RigidTransform tcp_from_tool;       // latent reference-tool offset
  registration::FiducialSet phantom_fiducials;  // 10, frame "phantom"
  registration::FiducialSet qr_markers;         // 3, frame "phantom"
  registration::FiducialSet ureter_vertices;    // 20, frame "phantom"
  metrics::PathSpec plan;                       // phantom frame
};

WorldTruth gen_world(const NoiseConfig& cfg);

struct CalibrationReport {
  double rmse_e2h_mm = 0.0;
  double rmse_r2p_mm = 0.0, r2p_median_mm = 0.0, r2p_sd_mm = 0.0;
  double rmse_h2p_mm = 0.0, h2p_median_mm = 0.0, h2p_sd_mm = 0.0;

  // truth-referenced diagnostics
  double handeye_rot_err_deg = 0.0, handeye_trans_err_mm = 0.0;
  double r2p_rot_err_deg = 0.0, r2p_trans_err_mm = 0.0;
  double handeye_rot_residual_deg = 0.0, handeye_trans_residual_mm = 0.0;
  int handeye_motions_used = 0;
  bool handeye_poorly_conditioned = false;
  bool h2p_zero_redundancy = false;

  std::vector<std::pair<std::string, double>> rows() const;
  std::string formatted() const;
};

/// Simulates the full calibration chain: 80 robot configurations for the
/// hand-eye solve, 50-sample probe blocks for the robot-to-phantom fit and
/// a 3-QR hologram registration, then grades each stage against truth.
CalibrationReport run_pipeline(const WorldTruth& world, const NoiseConfig& cfg,
                               const robot::KinematicChain& chain, int configurations = 80,
                               int probe_samples = 50);
CalibrationReport run_pipeline(const WorldTruth& world, const NoiseConfig& cfg);

/// Modality presets of the synthetic operator. These values are
/// assumptions (they stand in for human factors that cannot be simulated);
/// reports echo them and only the cross-modality ordering is meaningful.
guidance::OperatorModel default_operator(metrics::Modality m, const NoiseConfig& cfg);

struct ExperimentOptions {
  int trials_per_modality = 50;
  std::vector<metrics::Modality> modalities = {metrics::Modality::SM, metrics::Modality::SG,
                                               metrics::Modality::AM, metrics::Modality::AG};
  guidance::InsertionSetup setup;  // path is filled from the world's plan
};

struct PairwiseTest {
  std::string metric;
  metrics::Modality a = metrics::Modality::SM, b = metrics::Modality::SM;
  double u = 0.0, p = 1.0;
  int stars = 0;
};

struct ExperimentReport {
  std::vector<metrics::TrialResult> trials;
  std::vector<metrics::GroupStats> stats;
  std::vector<PairwiseTest> tests;
  std::vector<std::pair<metrics::Modality, guidance::OperatorModel>> presets;

  std::string formatted() const;
};

ExperimentReport run_experiment(const WorldTruth& world, const NoiseConfig& cfg,
                                const ExperimentOptions& options = {});

}  // namespace pnav::scenario
