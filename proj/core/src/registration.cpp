#include "pnav/registration.hpp"

#include <algorithm>
#include <cmath>

namespace pnav::registration {

void FiducialSet::add(const std::string& name, const geom::Point3& p) {
  if (!p.allFinite()) throw DegenerateGeometry("fiducial '" + name + "' has non-finite coordinates");
  if (has(name)) throw MismatchedSets("duplicate fiducial name '" + name + "'");
  points.emplace_back(name, p);
}

const geom::Point3& FiducialSet::at(const std::string& name) const {
  for (const auto& [n, p] : points)
    if (n == name) return p;
  throw MismatchedSets("fiducial '" + name + "' not present in frame '" + frame + "'");
}

bool FiducialSet::has(const std::string& name) const {
  return std::any_of(points.begin(), points.end(), [&](const auto& e) { return e.first == name; });
}

std::vector<std::pair<geom::Point3, geom::Point3>> FiducialSet::matched_with(const FiducialSet& other) const {
  if (points.size() != other.points.size())
    throw MismatchedSets("fiducial sets differ in size: " + std::to_string(points.size()) + " vs " +
                         std::to_string(other.points.size()));
  std::vector<std::pair<geom::Point3, geom::Point3>> out;
  out.reserve(points.size());
  for (const auto& [name, p] : points) out.emplace_back(p, other.at(name));
  return out;
}

AveragedPoint average_samples(const ProbeSampleBlock& block) {
  if (block.samples.empty()) throw EmptyBlock("probe block '" + block.target_name + "' has no samples");
  if (!block.timestamps_us.empty() &&
      !std::is_sorted(block.timestamps_us.begin(), block.timestamps_us.end()))
    throw EmptyBlock("probe block '" + block.target_name + "' has decreasing timestamps");

  geom::Point3 mean = geom::Point3::Zero();
  for (const auto& s : block.samples) mean += s;
  mean /= static_cast<double>(block.samples.size());

  geom::Vec3 sd = geom::Vec3::Zero();
  const std::size_t n = block.samples.size();
  if (n > 1) {
    geom::Vec3 ss = geom::Vec3::Zero();
    for (const auto& s : block.samples) ss += (s - mean).cwiseAbs2();
    sd = (ss / static_cast<double>(n - 1)).cwiseSqrt();
  }
  return {mean, sd};
}

RigidFitResult svd_rigid_fit(const FiducialSet& src, const FiducialSet& dst) {
  const auto pairs = src.matched_with(dst);
  const std::size_t n = pairs.size();
  if (n < 3) throw InsufficientData("rigid fit needs >= 3 matched points, got " + std::to_string(n));

  geom::Point3 c_src = geom::Point3::Zero(), c_dst = geom::Point3::Zero();
  for (const auto& [s, d] : pairs) {
    c_src += s;
    c_dst += d;
  }
  c_src /= static_cast<double>(n);
  c_dst /= static_cast<double>(n);

  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (const auto& [s, d] : pairs) h += (s - c_src) * (d - c_dst).transpose();

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sig = svd.singularValues();
  // Planar sets are fine (sigma_3 ~ 0); only a collinear set, where the
  // second singular value also vanishes, leaves the rotation undetermined.
  const double cond = sig(0) > 0.0 ? sig(1) / sig(0) : 0.0;
  if (cond < 1e-9) throw DegenerateGeometry("fiducials are collinear: rotation about the line is unobservable");

  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  const Eigen::Matrix3d r = svd.matrixV() * d * svd.matrixU().transpose();

  RigidFitResult out;
  out.transform = geom::RigidTransform(r, c_dst - r * c_src);
  out.condition_ratio = cond;
  out.zero_redundancy = (n == 3);

  double ss = 0.0;
  for (const auto& [s, d2] : pairs) ss += (d2 - out.transform.apply(s)).squaredNorm();
  out.rmse_mm = std::sqrt(ss / static_cast<double>(n));
  return out;
}

std::vector<double> fiducial_errors(const FiducialSet& reference, const FiducialSet& measured,
                                    const geom::RigidTransform& t) {
  const auto pairs = reference.matched_with(measured);
  std::vector<double> errors;
  errors.reserve(pairs.size());
  for (const auto& [ref, meas] : pairs) errors.push_back((ref - t.apply(meas)).norm());
  return errors;
}

double rmse_fiducials(const FiducialSet& reference, const FiducialSet& measured,
                      const geom::RigidTransform& t) {
  const auto errors = fiducial_errors(reference, measured, t);
  if (errors.empty()) throw MismatchedSets("no fiducials to evaluate");
  double ss = 0.0;
  for (double e : errors) ss += e * e;
  return std::sqrt(ss / static_cast<double>(errors.size()));
}

}  // namespace pnav::registration
