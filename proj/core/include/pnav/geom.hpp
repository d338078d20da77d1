#pragma once

#include <Eigen/Dense>

#include "pnav/errors.hpp"

namespace pnav::geom {

using Point3 = Eigen::Vector3d;  // mm
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

constexpr double kOrthonormalTol = 1e-9;
constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Unit quaternion with the canonical sign convention w >= 0 (and, when
/// w == 0, first nonzero of x,y,z positive) so that serialization is
/// bit-stable. Used only at I/O boundaries; all internal algebra is on
/// rotation matrices.
struct UnitQuaternion {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  UnitQuaternion() = default;

  /// Normalizes and canonicalizes. Throws ZeroVector on a near-zero input.
  UnitQuaternion(double w_, double x_, double y_, double z_);

  static UnitQuaternion from_rotation(const Eigen::Matrix3d& r);
  Eigen::Matrix3d to_rotation() const;

  double norm() const;
};

/// SE(3) element: orthonormal rotation (det = +1) plus translation in mm.
/// Values are immutable after construction and validated there, so the
/// transform operations themselves never fail.
class RigidTransform {
public:
  RigidTransform() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

  /// Validates orthonormality and determinant. Inputs within 1e-6 of a
  /// proper rotation are snapped to the nearest rotation matrix; anything
  /// worse throws DegenerateGeometry.
  RigidTransform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation_mm);

  static RigidTransform identity() { return {}; }
  static RigidTransform from_quaternion(const UnitQuaternion& q, const Eigen::Vector3d& translation_mm);
  /// Rotation of `angle_rad` about `axis` (need not be unit), zero translation.
  static RigidTransform about_axis(const Eigen::Vector3d& axis, double angle_rad,
                                   const Eigen::Vector3d& translation_mm = Eigen::Vector3d::Zero());
  static RigidTransform translation(const Eigen::Vector3d& t_mm) {
    return RigidTransform(Eigen::Matrix3d::Identity(), t_mm);
  }

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }
  UnitQuaternion quaternion() const { return UnitQuaternion::from_rotation(rotation_); }

  /// Maps a point expressed in this transform's source frame into its
  /// destination frame: R p + t.
  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation_ * p + translation_; }
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return apply(p); }

  Eigen::Matrix4d matrix() const;

private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

/// a then b applied right-to-left: result maps p to a(b(p)).
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
inline RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) { return compose(a, b); }

RigidTransform invert(const RigidTransform& t);

/// Geodesic angle between the two rotations, in degrees, in [0, 180].
/// Evaluated through the relative quaternion so that sub-microdegree
/// differences are still resolved (the trace/acos form loses them).
double rotation_distance_deg(const RigidTransform& a, const RigidTransform& b);

/// Rotation-vector (axis * angle, rad) of R; inverse of rotation_from_vector.
Eigen::Vector3d rotation_to_vector(const Eigen::Matrix3d& r);
Eigen::Matrix3d rotation_from_vector(const Eigen::Vector3d& rv);

/// Nearest proper rotation in the Frobenius sense (SVD projection).
Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& m);

/// Frobenius-norm departure from orthonormality, ||R^T R - I||_F.
double orthonormality_error(const Eigen::Matrix3d& r);

}  // namespace pnav::geom
