#include "pnav/geom.hpp"

#include <cmath>

namespace pnav::geom {

namespace {

// Negate if needed so w >= 0; for w == 0 fall back to the first nonzero
// vector component. q and -q are the same rotation.
void canonicalize(double& w, double& x, double& y, double& z) {
  bool flip = false;
  if (w < 0.0) {
    flip = true;
  } else if (w == 0.0) {
    if (x < 0.0)
      flip = true;
    else if (x == 0.0 && y < 0.0)
      flip = true;
    else if (x == 0.0 && y == 0.0 && z < 0.0)
      flip = true;
  }
  if (flip) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
}

}  // namespace

UnitQuaternion::UnitQuaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (n < 1e-12) throw ZeroVector("quaternion norm is zero");
  w /= n;
  x /= n;
  y /= n;
  z /= n;
  canonicalize(w, x, y, z);
}

UnitQuaternion UnitQuaternion::from_rotation(const Eigen::Matrix3d& r) {
  const Eigen::Quaterniond q(r);
  UnitQuaternion out;
  out.w = q.w();
  out.x = q.x();
  out.y = q.y();
  out.z = q.z();
  canonicalize(out.w, out.x, out.y, out.z);
  return out;
}

Eigen::Matrix3d UnitQuaternion::to_rotation() const {
  return Eigen::Quaterniond(w, x, y, z).toRotationMatrix();
}

double UnitQuaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

RigidTransform::RigidTransform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation_mm)
    : rotation_(rotation), translation_(translation_mm) {
  if (!rotation_.allFinite() || !translation_.allFinite())
    throw DegenerateGeometry("rigid transform has non-finite entries");
  const double err = orthonormality_error(rotation_);
  if (err > 1e-6)
    throw DegenerateGeometry("rotation is not orthonormal (||R^T R - I||_F = " + std::to_string(err) + ")");
  if (err > 1e-12) rotation_ = orthonormalize(rotation_);
  if (rotation_.determinant() < 0.0)
    throw DegenerateGeometry("rotation has negative determinant (reflection)");
}

RigidTransform RigidTransform::from_quaternion(const UnitQuaternion& q, const Eigen::Vector3d& translation_mm) {
  return RigidTransform(q.to_rotation(), translation_mm);
}

RigidTransform RigidTransform::about_axis(const Eigen::Vector3d& axis, double angle_rad,
                                          const Eigen::Vector3d& translation_mm) {
  const double n = axis.norm();
  if (n < 1e-12) throw ZeroVector("rotation axis is zero");
  return RigidTransform(Eigen::AngleAxisd(angle_rad, axis / n).toRotationMatrix(), translation_mm);
}

Eigen::Matrix4d RigidTransform::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return RigidTransform(a.rotation() * b.rotation(), a.rotation() * b.translation() + a.translation());
}

RigidTransform invert(const RigidTransform& t) {
  const Eigen::Matrix3d rt = t.rotation().transpose();
  return RigidTransform(rt, -(rt * t.translation()));
}

double rotation_distance_deg(const RigidTransform& a, const RigidTransform& b) {
  const Eigen::Quaterniond qa(a.rotation());
  const Eigen::Quaterniond qb(b.rotation());
  const Eigen::Quaterniond rel = qa.conjugate() * qb;
  // atan2 keeps full precision for tiny angles where acos((tr-1)/2) saturates
  const double angle = 2.0 * std::atan2(rel.vec().norm(), std::abs(rel.w()));
  return rad_to_deg(angle);
}

Eigen::Vector3d rotation_to_vector(const Eigen::Matrix3d& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.angle() * aa.axis();
}

Eigen::Matrix3d rotation_from_vector(const Eigen::Vector3d& rv) {
  const double angle = rv.norm();
  if (angle < 1e-30) return Eigen::Matrix3d::Identity();
  return Eigen::AngleAxisd(angle, rv / angle).toRotationMatrix();
}

Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

double orthonormality_error(const Eigen::Matrix3d& r) {
  return (r.transpose() * r - Eigen::Matrix3d::Identity()).norm();
}

}  // namespace pnav::geom
