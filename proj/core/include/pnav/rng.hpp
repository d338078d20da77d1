#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace pnav {

/// Deterministic random source for everything in the toolkit. Wraps a
/// splitmix64-seeded xoshiro256++ core with explicit Box-Muller normals so
/// that a given seed produces the same stream on every platform (the
/// std::*_distribution classes are implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller (spare value cached).
  double normal();
  double normal(double mean, double sd);

  Eigen::Vector3d normal_vec3(double sd);

  /// Uniformly distributed unit vector.
  Eigen::Vector3d unit_vec3();

  /// Uniform random rotation (axis uniform on the sphere, angle uniform
  /// in [0, max_angle_rad]).
  Eigen::Matrix3d random_rotation(double max_angle_rad);

  /// Rotation with normally distributed angle magnitude |N(0, sd)| about a
  /// uniform axis.
  Eigen::Matrix3d rotation_noise(double angle_sd_rad);

private:
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stateless mixer for deriving independent per-trial seeds from a base
/// seed and an index, so trial order/parallelism cannot change results.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace pnav
