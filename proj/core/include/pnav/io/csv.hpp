#pragma once

#include <string>
#include <vector>

#include "pnav/geom.hpp"
#include "pnav/handeye.hpp"
#include "pnav/metrics.hpp"
#include "pnav/registration.hpp"
#include "pnav/scenario.hpp"

namespace pnav::io {

/// All CSV emitters format doubles with 17 significant digits, so parsing
/// an emitted file reproduces the producing values exactly.
std::string format_double(double v);
double parse_double(const std::string& s);

std::vector<std::string> split_csv_line(const std::string& line);

/// Named transform rows: name,qw,qx,qy,qz,tx,ty,tz
struct NamedTransform {
  std::string name;
  geom::RigidTransform transform;
};
std::string transforms_to_csv(const std::vector<NamedTransform>& rows);
std::vector<NamedTransform> transforms_from_csv(const std::string& text);

/// Fiducial rows: name,x,y,z (frame travels out of band)
std::string fiducials_to_csv(const registration::FiducialSet& set);
registration::FiducialSet fiducials_from_csv(const std::string& text, const std::string& frame);

/// Pose-pair rows: two transform blocks per row,
/// name,tcp_qw..tcp_tz,ref_qw..ref_tz
std::string pose_pairs_to_csv(const std::vector<handeye::PosePair>& pairs);
std::vector<handeye::PosePair> pose_pairs_from_csv(const std::string& text);

/// Trial rows: modality,seed,e_t_mm,e_o_deg,t_total_s
std::string trials_to_csv(const std::vector<metrics::TrialResult>& trials);
std::vector<metrics::TrialResult> trials_from_csv(const std::string& text);

/// Generic per-group values: group,value (NASA-TLX style ingest)
struct GroupedValue {
  std::string group;
  double value = 0.0;
};
std::vector<GroupedValue> grouped_values_from_csv(const std::string& text);

/// Table-shaped stats: metric column then median/sd per modality present.
std::string stats_to_csv(const std::vector<metrics::GroupStats>& stats);

std::string wilcoxon_to_csv(const std::vector<scenario::PairwiseTest>& tests);

std::string calibration_to_csv(const scenario::CalibrationReport& report);

/// Simulated trajectory rows: t_s then pose and velocity components.
std::string trajectory_to_csv(const std::vector<guidance::SimState>& traj);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace pnav::io
