#include "pnav/guidance.hpp"

#include <algorithm>
#include <cmath>

namespace pnav::guidance {

namespace {

// Right-handed basis [u, v, a] with the insertion axis last. For a = z this
// is the standard basis, so canonical fixtures diagonalize exactly.
void lateral_basis(const geom::Vec3& a, geom::Vec3& u, geom::Vec3& v) {
  geom::Vec3 helper = geom::Vec3::UnitY().cross(a);
  if (helper.norm() < 1e-6) helper = geom::Vec3::UnitZ().cross(a);
  u = helper.normalized();
  v = a.cross(u);
}

constexpr double kMmPerM = 1000.0;

// ImpedanceParams expanded into base-frame 3x3 blocks so the inner
// simulation loop pays no per-step basis products.
struct ImpedanceBlocks {
  Eigen::Matrix3d k_t, k_r, d_t, d_r;
  bool active = false;

  static ImpedanceBlocks from(const ImpedanceParams& p) {
    ImpedanceBlocks b;
    b.active = (p.mode == ControlMode::Stiffened);
    const Eigen::Matrix3d& basis = p.basis;
    b.k_t = basis * p.stiffness.head<3>().asDiagonal() * basis.transpose();
    b.k_r = basis * p.stiffness.tail<3>().asDiagonal() * basis.transpose();
    b.d_t = basis * p.damping.head<3>().asDiagonal() * basis.transpose();
    b.d_r = basis * p.damping.tail<3>().asDiagonal() * basis.transpose();
    return b;
  }

  Vec6 wrench(const Vec6& pose_err, const Vec6& vel) const {
    Vec6 f = Vec6::Zero();
    if (!active) return f;
    // translational rows: mm -> m so stiffness in N/m yields newtons
    f.head<3>() = k_t * (pose_err.head<3>() / kMmPerM) - d_t * (vel.head<3>() / kMmPerM);
    f.tail<3>() = k_r * pose_err.tail<3>() - d_r * vel.tail<3>();
    return f;
  }
};

}  // namespace

Vec6 critical_damping(const Vec6& stiffness, double zeta, const Vec6& m_eff) {
  if ((stiffness.array() < 0.0).any()) throw ConfigError("stiffness diagonal must be >= 0");
  if (zeta < 0.0 || zeta > 1.0) throw ConfigError("damping ratio must lie in [0, 1]");
  return 2.0 * zeta * (stiffness.array() * m_eff.array()).sqrt();
}

Mat6 FixtureStiffness::in_base() const {
  Mat6 s = Mat6::Zero();
  s.topLeftCorner<3, 3>() = to_base * fixture_diag.head<3>().asDiagonal() * to_base.transpose();
  s.bottomRightCorner<3, 3>() = to_base * fixture_diag.tail<3>().asDiagonal() * to_base.transpose();
  return s;
}

FixtureStiffness fixture_stiffness(const FixtureFrame& frame, double lateral_n_per_m,
                                   double rotational_nm_per_rad) {
  if (std::abs(frame.axis.norm() - 1.0) > geom::kOrthonormalTol)
    throw DegenerateGeometry("fixture axis must be unit-norm");
  FixtureStiffness out;
  geom::Vec3 u, v;
  lateral_basis(frame.axis, u, v);
  out.to_base.col(0) = u;
  out.to_base.col(1) = v;
  out.to_base.col(2) = frame.axis;
  out.fixture_diag << lateral_n_per_m, lateral_n_per_m, 0.0, rotational_nm_per_rad,
      rotational_nm_per_rad, rotational_nm_per_rad;
  return out;
}

Vec6 pose_error(const Vec6& x_des, const Vec6& x_msr) {
  Vec6 e;
  e.head<3>() = x_des.head<3>() - x_msr.head<3>();
  const Eigen::Matrix3d r_des = geom::rotation_from_vector(x_des.tail<3>());
  const Eigen::Matrix3d r_msr = geom::rotation_from_vector(x_msr.tail<3>());
  e.tail<3>() = geom::rotation_to_vector(r_des * r_msr.transpose());
  return e;
}

Vec6 impedance_force(const Vec6& x_des, const Vec6& x_msr, const Vec6& v, const ImpedanceParams& p) {
  if (p.mode == ControlMode::GravityCompensation) return Vec6::Zero();
  return ImpedanceBlocks::from(p).wrench(pose_error(x_des, x_msr), v);
}

SimState step_dynamics(const SimState& s, const Vec6& f_operator, const Vec6& f_controller,
                       const Vec6& m_eff, double dt_s) {
  if (!(dt_s > 0.0) || dt_s > 0.01)
    throw InvalidTimestep("dt must lie in (0, 0.01] s, got " + std::to_string(dt_s));
  if ((m_eff.array() <= 0.0).any()) throw ConfigError("effective mass diagonal must be positive");

  SimState out = s;
  const Vec6 f = f_operator + f_controller;
  out.v.head<3>() += (f.head<3>().array() / m_eff.head<3>().array()).matrix() * (kMmPerM * dt_s);
  out.v.tail<3>() += (f.tail<3>().array() / m_eff.tail<3>().array()).matrix() * dt_s;
  out.x += out.v * dt_s;
  out.t_s += dt_s;
  return out;
}

namespace {

// First-order low-passed Gaussian goal jitter. The innovation is drawn at
// ~100 Hz and held, which is still >> the 2 Hz band of interest; the
// (alpha, gain) pair keeps the stationary SD exactly at the configured
// value.
class TremorFilter {
public:
  TremorFilter(double cutoff_hz, double sd_mm, double rot_sd_rad, double dt_s, Rng& rng)
      : rng_(rng), sd_mm_(sd_mm), rot_sd_rad_(rot_sd_rad) {
    update_every_ = std::max(1, static_cast<int>(std::lround(0.01 / dt_s)));
    const double update_dt = dt_s * update_every_;
    alpha_ = std::exp(-2.0 * geom::kPi * cutoff_hz * update_dt);
    gain_ = std::sqrt(std::max(0.0, 1.0 - alpha_ * alpha_));
  }

  const Vec6& step() {
    if (counter_++ % update_every_ == 0) {
      for (int i = 0; i < 3; ++i) value_(i) = alpha_ * value_(i) + gain_ * rng_.normal(0.0, sd_mm_);
      for (int i = 3; i < 6; ++i) value_(i) = alpha_ * value_(i) + gain_ * rng_.normal(0.0, rot_sd_rad_);
    }
    return value_;
  }

private:
  Rng& rng_;
  double sd_mm_, rot_sd_rad_, alpha_, gain_;
  int update_every_ = 10;
  long counter_ = 0;
  Vec6 value_ = Vec6::Zero();
};

// "Stopped improving" detector: compares the current error against the
// value one window ago. Fires at noise floors of any magnitude.
class PlateauDetector {
public:
  PlateauDetector(int window_steps) : window_(std::max(1, window_steps)), history_(window_ + 1, 0.0) {}

  bool update(double err) {
    history_[static_cast<std::size_t>(count_ % (window_ + 1))] = err;
    ++count_;
    if (count_ <= window_) return false;
    const double old = history_[static_cast<std::size_t>(count_ % (window_ + 1))];
    return err >= 0.95 * old;
  }

private:
  int window_;
  long count_ = 0;
  std::vector<double> history_;
};

Eigen::Matrix3d state_rotation(const SimState& s) { return geom::rotation_from_vector(s.x.tail<3>()); }

}  // namespace

InsertionOutcome simulate_insertion(metrics::Modality mode, const InsertionSetup& setup,
                                    const OperatorModel& op, std::uint64_t seed) {
  if (std::abs(setup.path.axis.norm() - 1.0) > 1e-9)
    throw ConfigError("insertion path axis must be unit-norm");
  if (setup.planned_length_mm <= 0.0) throw ConfigError("planned length must be positive");
  if (op.intent_speed_mm_s <= 0.0) throw ConfigError("operator intent speed must be positive");

  const bool guided = (mode == metrics::Modality::SG || mode == metrics::Modality::AG);
  const double dt = setup.dt_s;
  const double len = setup.planned_length_mm;
  const geom::Vec3 axis = setup.path.axis;
  const geom::Point3 entry = setup.path.origin_mm;

  Rng rng(seed);

  // Per-trial draws, in a fixed order so runs replay bit-identically.
  geom::Vec3 u1, u2;
  lateral_basis(axis, u1, u2);
  const geom::Vec3 perception_lat =
      u1 * rng.normal(0.0, op.perception_lat_sd_mm) + u2 * rng.normal(0.0, op.perception_lat_sd_mm);
  const Eigen::Matrix3d perception_rot = rng.rotation_noise(geom::deg_to_rad(op.perception_rot_sd_deg));
  const Eigen::Matrix3d insertion_drift = rng.rotation_noise(geom::deg_to_rad(op.insertion_drift_sd_deg));
  const double align_overhead = std::abs(rng.normal(op.align_overhead_mean_s, op.align_overhead_sd_s));
  const geom::Vec3 start_offset = rng.normal_vec3(10.0);
  const Eigen::Matrix3d start_rot = rng.rotation_noise(geom::deg_to_rad(8.0));

  // The pose the operator believes is aligned: tip on (their perceived)
  // entry, needle along (their perceived) planned direction.
  const Eigen::Matrix3d r_plan =
      Eigen::Quaterniond::FromTwoVectors(Eigen::Vector3d::UnitZ(), axis).toRotationMatrix();
  const Eigen::Matrix3d r_goal = perception_rot * r_plan;
  const geom::Vec3 dir_goal = r_goal * Eigen::Vector3d::UnitZ();
  const geom::Point3 base_goal = entry + perception_lat - len * dir_goal;
  const Vec6 rot_goal_vec = (Vec6() << base_goal, geom::rotation_to_vector(r_goal)).finished();

  InsertionOutcome out;
  out.result.modality = mode;
  out.result.seed = seed;

  SimState s;
  s.x.head<3>() = base_goal + start_offset;
  s.x.tail<3>() = geom::rotation_to_vector(start_rot * r_goal);

  ImpedanceParams hand;
  hand.stiffness << op.hand_stiffness_n_per_m, op.hand_stiffness_n_per_m, op.hand_stiffness_n_per_m,
      op.hand_rot_stiffness_nm_per_rad, op.hand_rot_stiffness_nm_per_rad, op.hand_rot_stiffness_nm_per_rad;
  hand.zeta = 1.0;
  hand.damping = critical_damping(hand.stiffness, hand.zeta, setup.m_eff);
  const ImpedanceBlocks hand_blocks = ImpedanceBlocks::from(hand);

  TremorFilter tremor(op.tremor_cutoff_hz, op.tremor_sd_mm, geom::deg_to_rad(op.tremor_rot_sd_deg), dt, rng);
  const int plateau_window = std::max(1, static_cast<int>(std::lround(0.25 / dt)));
  const Vec6 zero = Vec6::Zero();

  auto record = [&](const SimState& st) {
    if (setup.record_trajectory) out.trajectory.push_back(st);
  };
  record(s);

  // ---- Phase 1: free manipulation for alignment (controller passive) ----
  {
    PlateauDetector plateau(plateau_window);
    const double min_time = 0.3;
    while (true) {
      const Vec6& trem = tremor.step();
      Vec6 x_goal = rot_goal_vec;
      x_goal.head<3>() += trem.head<3>();
      x_goal.tail<3>() =
          geom::rotation_to_vector(geom::rotation_from_vector(trem.tail<3>()) * r_goal);
      const Vec6 f_op = hand_blocks.wrench(pose_error(x_goal, s.x), s.v);
      s = step_dynamics(s, f_op, zero, setup.m_eff, dt);
      record(s);

      // error against the clean perceived goal (tremor excluded)
      const geom::Vec3 d = s.x.head<3>() - base_goal;
      const double lat = (d - d.dot(dir_goal) * dir_goal).norm();
      const double ang = geom::rotation_to_vector(state_rotation(s) * r_goal.transpose()).norm();
      const double err = std::max(lat / setup.align_thresh_lat_mm,
                                  ang / geom::deg_to_rad(setup.align_thresh_rot_deg));
      const bool flat = plateau.update(err);
      if (s.t_s >= min_time && err <= 1.0 && (flat || err < 1e-10)) break;
      if (s.t_s >= setup.max_align_time_s) {
        out.align_timed_out = true;
        break;
      }
    }
  }
  out.align_sim_time_s = s.t_s;

  // ---- "Aligned" event: stiffen in guided modes ----
  const Eigen::Matrix3d r_stiffen = state_rotation(s);
  const geom::Vec3 needle_dir = r_stiffen * Eigen::Vector3d::UnitZ();
  const geom::Point3 base_stiffen = s.x.head<3>();
  const Vec6 rot_stiffen_vec = (Vec6() << base_stiffen, geom::rotation_to_vector(r_stiffen)).finished();

  ImpedanceParams ctrl;
  if (guided) {
    const FixtureStiffness fs =
        fixture_stiffness({base_stiffen, needle_dir}, setup.lateral_stiffness_n_per_m,
                          setup.rot_stiffness_nm_per_rad);
    ctrl.stiffness = fs.fixture_diag;
    ctrl.basis = fs.to_base;
    ctrl.zeta = setup.zeta;
    ctrl.damping = critical_damping(ctrl.stiffness, ctrl.zeta, setup.m_eff);
    ctrl.mode = ControlMode::Stiffened;
  } else {
    ctrl.mode = ControlMode::GravityCompensation;
  }
  const ImpedanceBlocks ctrl_blocks = ImpedanceBlocks::from(ctrl);

  // Manual insertion keeps whatever heading the hand drifts to; guided
  // insertion can only advance along the stiffened needle line.
  const geom::Vec3 dir_insert = guided ? needle_dir : geom::Vec3(insertion_drift * needle_dir);
  const Eigen::Matrix3d r_insert = guided ? r_stiffen : Eigen::Matrix3d(insertion_drift * r_stiffen);
  const Eigen::Vector3d rot_insert_vec = geom::rotation_to_vector(r_insert);

  // ---- Phase 2: puncture ----
  {
    PlateauDetector plateau(plateau_window);
    const double t0 = s.t_s;
    const double t_reach = len / op.intent_speed_mm_s;
    while (true) {
      const double cmd = std::min((s.t_s - t0) * op.intent_speed_mm_s, len);
      const Vec6& trem = tremor.step();
      Vec6 x_goal;
      x_goal.head<3>() = base_stiffen + cmd * dir_insert + trem.head<3>();
      x_goal.tail<3>() = geom::rotation_to_vector(geom::rotation_from_vector(trem.tail<3>()) * r_insert);
      const Vec6 f_op = hand_blocks.wrench(pose_error(x_goal, s.x), s.v);

      Vec6 f_ctrl = zero;
      if (guided) {
        const geom::Vec3 d = s.x.head<3>() - base_stiffen;
        Vec6 x_fix = rot_stiffen_vec;
        x_fix.head<3>() = base_stiffen + d.dot(needle_dir) * needle_dir;
        f_ctrl = ctrl_blocks.wrench(pose_error(x_fix, s.x), s.v);
      }

      s = step_dynamics(s, f_op, f_ctrl, setup.m_eff, dt);
      record(s);

      if (cmd >= len) {
        const double pos_err = (s.x.head<3>() - (base_stiffen + len * dir_insert)).norm();
        const double rot_err = (s.x.tail<3>() - rot_insert_vec).norm() * len;
        const double err = pos_err + rot_err;
        const bool flat = plateau.update(err);
        if (flat || err < 1e-12) break;
        if (s.t_s - t0 > t_reach + setup.max_settle_time_s) break;
      }
    }
    out.insertion_sim_time_s = s.t_s - t0;
  }

  // ---- Score against the true plan ----
  metrics::PathSpec plan;
  plan.entry = entry;
  plan.v_p = len * axis;
  metrics::NeedleObservation obs;
  obs.base = s.x.head<3>();
  obs.v_r = len * (state_rotation(s) * Eigen::Vector3d::UnitZ());
  const metrics::PathErrors err = metrics::path_errors(plan, obs);

  out.result.e_t_mm = err.e_t_mm;
  out.result.e_o_deg = err.e_o_deg;
  out.result.t_total_s = align_overhead + s.t_s;
  return out;
}

}  // namespace pnav::guidance
