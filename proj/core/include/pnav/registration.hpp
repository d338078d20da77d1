#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pnav/geom.hpp"

namespace pnav::registration {

/// Named 3D marker positions expressed in one declared frame. Names are the
/// correspondence keys between frames; order is preserved for output but
/// matching is always by name.
struct FiducialSet {
  std::string frame;
  std::vector<std::pair<std::string, geom::Point3>> points;

  FiducialSet() = default;
  explicit FiducialSet(std::string frame_id) : frame(std::move(frame_id)) {}

  void add(const std::string& name, const geom::Point3& p);
  std::size_t size() const { return points.size(); }
  const geom::Point3& at(const std::string& name) const;
  bool has(const std::string& name) const;

  /// Throws MismatchedSets unless both sets carry exactly the same names.
  /// Returned pairs are ordered by this set's point order.
  std::vector<std::pair<geom::Point3, geom::Point3>> matched_with(const FiducialSet& other) const;
};

/// Repeated probe acquisitions of one physical target.
struct ProbeSampleBlock {
  std::string target_name;
  std::vector<geom::Point3> samples;
  std::vector<std::uint64_t> timestamps_us;  // nondecreasing when present
};

struct AveragedPoint {
  geom::Point3 mean;
  geom::Vec3 per_axis_sd;  // sample SD, n-1 denominator (0 for n = 1)
};

/// Componentwise mean of a probe block. Throws EmptyBlock.
AveragedPoint average_samples(const ProbeSampleBlock& block);

struct RigidFitResult {
  geom::RigidTransform transform;  // maps src-frame points onto dst
  double rmse_mm = 0.0;            // residual of the fit itself
  double condition_ratio = 0.0;    // sigma_2 / sigma_1 of the cross-covariance
  bool zero_redundancy = false;    // exactly 3 points: fit has no spare constraint
};

/// Least-squares rigid fit of matched point sets via cross-covariance SVD
/// with determinant sign correction (reflections are never returned).
/// Needs >= 3 non-collinear points matched by name; collinear input throws
/// DegenerateGeometry.
RigidFitResult svd_rigid_fit(const FiducialSet& src, const FiducialSet& dst);

/// RMSE over E_n = ||reference_n - t * measured_n||, matched by name.
double rmse_fiducials(const FiducialSet& reference, const FiducialSet& measured,
                      const geom::RigidTransform& t);

/// Per-marker errors behind rmse_fiducials, in reference order. Used for
/// the median +- SD lines of the calibration report.
std::vector<double> fiducial_errors(const FiducialSet& reference, const FiducialSet& measured,
                                    const geom::RigidTransform& t);

}  // namespace pnav::registration
