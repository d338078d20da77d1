#include "pnav/rng.hpp"

#include <cmath>

#include "pnav/geom.hpp"

namespace pnav {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  spare_ = mag * std::sin(2.0 * geom::kPi * u2);
  has_spare_ = true;
  return mag * std::cos(2.0 * geom::kPi * u2);
}

double Rng::normal(double mean, double sd) { return mean + sd * normal(); }

Eigen::Vector3d Rng::normal_vec3(double sd) {
  return Eigen::Vector3d(normal(0.0, sd), normal(0.0, sd), normal(0.0, sd));
}

Eigen::Vector3d Rng::unit_vec3() {
  const double z = uniform(-1.0, 1.0);
  const double phi = uniform(0.0, 2.0 * geom::kPi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z);
}

Eigen::Matrix3d Rng::random_rotation(double max_angle_rad) {
  const Eigen::Vector3d axis = unit_vec3();
  const double angle = uniform(0.0, max_angle_rad);
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

Eigen::Matrix3d Rng::rotation_noise(double angle_sd_rad) {
  if (angle_sd_rad <= 0.0) return Eigen::Matrix3d::Identity();
  const Eigen::Vector3d axis = unit_vec3();
  const double angle = normal(0.0, angle_sd_rad);
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t x = base ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  return splitmix64(x);
}

}  // namespace pnav
