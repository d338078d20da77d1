#include "pnav/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pnav::scenario {

using geom::Point3;
using geom::RigidTransform;
using geom::Vec3;
using metrics::Modality;

void NoiseConfig::validate() const {
  if (tracker_pos_sd_mm < 0 || tracker_rot_sd_deg < 0 || probe_sd_mm < 0 || hologram_drift_sd_mm < 0 ||
      operator_tremor_sd_mm < 0)
    throw ConfigError("noise standard deviations must be >= 0");
}

namespace {

constexpr double kPhantomRadiusMm = 120.0;
constexpr double kPhantomHalfLenMm = 200.0;

Point3 cylinder_point(double theta, double y) {
  return {kPhantomRadiusMm * std::cos(theta), y, kPhantomRadiusMm * std::sin(theta)};
}

double frac(double v) { return v - std::floor(v); }

RigidTransform noisy_pose(const RigidTransform& t, Rng& rng, double pos_sd_mm, double rot_sd_rad) {
  return RigidTransform(rng.rotation_noise(rot_sd_rad) * t.rotation(),
                        t.translation() + rng.normal_vec3(pos_sd_mm));
}

// Orthonormal frame spanned by the three QR markers: origin at their
// centroid, x toward the first marker.
RigidTransform qr_frame_in_phantom(const registration::FiducialSet& qr) {
  const Point3 c = (qr.points[0].second + qr.points[1].second + qr.points[2].second) / 3.0;
  const Vec3 ex = (qr.points[0].second - c).normalized();
  Vec3 ez = ex.cross(qr.points[1].second - c).normalized();
  const Vec3 ey = ez.cross(ex);
  Eigen::Matrix3d r;
  r.col(0) = ex;
  r.col(1) = ey;
  r.col(2) = ez;
  return RigidTransform(r, c);
}

}  // namespace

WorldTruth gen_world(const NoiseConfig& cfg) {
  cfg.validate();
  Rng rng(mix_seed(cfg.seed, 7));

  WorldTruth w;

  // Fiducials spread over the half-cylinder surface with an R2
  // low-discrepancy sequence plus a small seeded jitter.
  w.phantom_fiducials = registration::FiducialSet("phantom");
  for (int i = 0; i < 10; ++i) {
    const double a = frac(0.7548776662466927 * (i + 1) + 0.11);
    const double b = frac(0.5698402909980532 * (i + 1) + 0.41);
    const double theta = geom::kPi * (0.08 + 0.84 * a) + rng.normal(0.0, 0.02);
    const double y = -0.9 * kPhantomHalfLenMm + 1.8 * kPhantomHalfLenMm * b + rng.normal(0.0, 4.0);
    w.phantom_fiducials.add("M" + std::to_string(i + 1), cylinder_point(theta, y));
  }

  w.qr_markers = registration::FiducialSet("phantom");
  w.qr_markers.add("Q1", cylinder_point(0.30 * geom::kPi + rng.normal(0.0, 0.02), -150.0 + rng.normal(0.0, 5.0)));
  w.qr_markers.add("Q2", cylinder_point(0.52 * geom::kPi + rng.normal(0.0, 0.02), 20.0 + rng.normal(0.0, 5.0)));
  w.qr_markers.add("Q3", cylinder_point(0.72 * geom::kPi + rng.normal(0.0, 0.02), 160.0 + rng.normal(0.0, 5.0)));

  // Ureter: a gentle arc inside the phantom.
  w.ureter_vertices = registration::FiducialSet("phantom");
  const Point3 u_start(35.0, -70.0, 55.0);
  const Point3 u_end(-25.0, 130.0, 85.0);
  const Vec3 bulge(18.0, 0.0, 12.0);
  for (int j = 0; j < 20; ++j) {
    const double t = static_cast<double>(j) / 19.0;
    const Point3 p = u_start + t * (u_end - u_start) + std::sin(geom::kPi * t) * bulge;
    w.ureter_vertices.add("V" + std::to_string(j + 1), p);
  }

  // Planned path: entry on the surface, target on the ureter arc.
  const Point3 target = w.ureter_vertices.points[8].second;
  const Point3 entry = cylinder_point(0.38 * geom::kPi + rng.normal(0.0, 0.03), target.y() - 25.0 + rng.normal(0.0, 6.0));
  w.plan.entry = entry;
  w.plan.v_p = target - entry;

  // Scene layout: phantom in front of the robot, tracker overhead at a
  // couple of metres, arbitrary reference-tool offset on the flange.
  w.base_from_phantom = RigidTransform(rng.random_rotation(0.35),
                                       Vec3(560.0, 70.0, 140.0) + rng.normal_vec3(40.0));
  w.base_from_tracker = RigidTransform(rng.random_rotation(geom::kPi),
                                       Vec3(1250.0, 850.0, 1350.0) + rng.normal_vec3(120.0));
  w.tcp_from_tool = RigidTransform(rng.random_rotation(geom::kPi), Vec3(25.0, -18.0, 70.0) + rng.normal_vec3(10.0));
  w.hmd_from_phantom = RigidTransform(rng.random_rotation(0.5), Vec3(-30.0, -220.0, 780.0) + rng.normal_vec3(60.0));
  w.hmd_from_qr = compose(w.hmd_from_phantom, invert(qr_frame_in_phantom(w.qr_markers)));
  return w;
}

std::vector<std::pair<std::string, double>> CalibrationReport::rows() const {
  return {
      {"rmse_e2h_mm", rmse_e2h_mm},
      {"rmse_r2p_mm", rmse_r2p_mm},
      {"r2p_median_mm", r2p_median_mm},
      {"r2p_sd_mm", r2p_sd_mm},
      {"rmse_h2p_mm", rmse_h2p_mm},
      {"h2p_median_mm", h2p_median_mm},
      {"h2p_sd_mm", h2p_sd_mm},
      {"handeye_rot_err_deg", handeye_rot_err_deg},
      {"handeye_trans_err_mm", handeye_trans_err_mm},
      {"handeye_rot_residual_deg", handeye_rot_residual_deg},
      {"handeye_trans_residual_mm", handeye_trans_residual_mm},
      {"handeye_motions_used", static_cast<double>(handeye_motions_used)},
      {"handeye_poorly_conditioned", handeye_poorly_conditioned ? 1.0 : 0.0},
      {"r2p_rot_err_deg", r2p_rot_err_deg},
      {"r2p_trans_err_mm", r2p_trans_err_mm},
      {"h2p_zero_redundancy", h2p_zero_redundancy ? 1.0 : 0.0},
  };
}

std::string CalibrationReport::formatted() const {
  char buf[256];
  std::ostringstream os;
  os << "Calibration and registration results (synthetic)\n";
  std::snprintf(buf, sizeof buf, "  RMSE_E2H = %.2f mm\n", rmse_e2h_mm);
  os << buf;
  std::snprintf(buf, sizeof buf, "  RMSE_R2P = %.2f mm (median %.2f +- %.2f mm)\n", rmse_r2p_mm,
                r2p_median_mm, r2p_sd_mm);
  os << buf;
  std::snprintf(buf, sizeof buf, "  RMSE_H2P = %.2f mm (median %.2f +- %.2f mm)\n", rmse_h2p_mm,
                h2p_median_mm, h2p_sd_mm);
  os << buf;
  if (handeye_poorly_conditioned) os << "  warning: hand-eye pose set poorly conditioned\n";
  if (h2p_zero_redundancy) os << "  note: hologram registration uses exactly 3 points (no redundancy)\n";
  return os.str();
}

CalibrationReport run_pipeline(const WorldTruth& world, const NoiseConfig& cfg,
                               const robot::KinematicChain& chain, int configurations,
                               int probe_samples) {
  cfg.validate();
  if (configurations < 2) throw ConfigError("pipeline needs >= 2 robot configurations");
  if (probe_samples < 1) throw ConfigError("pipeline needs >= 1 probe sample per marker");

  Rng rng(mix_seed(cfg.seed, 0xCA11));
  const RigidTransform& x_true = world.base_from_tracker;
  const RigidTransform tracker_from_base = invert(x_true);
  const double rot_sd_rad = geom::deg_to_rad(cfg.tracker_rot_sd_deg);

  // --- Eye-to-hand: n robot configurations, tracked reference tool ---
  std::vector<handeye::PosePair> pairs;
  pairs.reserve(static_cast<std::size_t>(configurations));
  Eigen::VectorXd q(chain.size());
  for (int i = 0; i < configurations; ++i) {
    for (Eigen::Index k = 0; k < q.size(); ++k) q(k) = rng.uniform(-1.5, 1.5);
    const RigidTransform tcp = robot::forward_kinematics(chain, q);
    const RigidTransform tool_in_tracker = compose(tracker_from_base, compose(tcp, world.tcp_from_tool));
    const RigidTransform measured = noisy_pose(tool_in_tracker, rng, cfg.tracker_pos_sd_mm, rot_sd_rad);
    pairs.push_back({tcp, invert(measured)});
  }
  const auto motions = handeye::make_motion_pairs(pairs);
  const auto sol = handeye::solve_axxb(motions);

  CalibrationReport rep;
  rep.handeye_rot_err_deg = geom::rotation_distance_deg(sol.x, x_true);
  rep.handeye_trans_err_mm = (sol.x.translation() - x_true.translation()).norm();
  rep.handeye_rot_residual_deg = sol.rotation_residual_deg;
  rep.handeye_trans_residual_mm = sol.translation_residual_mm;
  rep.handeye_motions_used = sol.motions_used;
  rep.handeye_poorly_conditioned = sol.poorly_conditioned;

  // --- E2H evaluation on the phantom fiducials ---
  registration::FiducialSet markers_robot("base");
  registration::FiducialSet markers_tracker("tracker");
  for (const auto& [name, p] : world.phantom_fiducials.points) {
    const Point3 in_base = world.base_from_phantom.apply(p);
    markers_robot.add(name, in_base);
    markers_tracker.add(name, tracker_from_base.apply(in_base) + rng.normal_vec3(cfg.tracker_pos_sd_mm));
  }
  rep.rmse_e2h_mm = handeye::rmse_e2h(markers_tracker, markers_robot, sol.x);

  // --- Robot-to-phantom: probed markers mapped through the solved X ---
  registration::FiducialSet probed_base("base");
  for (const auto& [name, p] : world.phantom_fiducials.points) {
    const Point3 in_tracker = tracker_from_base.apply(world.base_from_phantom.apply(p));
    registration::ProbeSampleBlock block;
    block.target_name = name;
    block.samples.reserve(static_cast<std::size_t>(probe_samples));
    for (int k = 0; k < probe_samples; ++k)
      block.samples.push_back(in_tracker + rng.normal_vec3(cfg.probe_sd_mm));
    probed_base.add(name, sol.x.apply(registration::average_samples(block).mean));
  }
  const auto fit = registration::svd_rigid_fit(world.phantom_fiducials, probed_base);
  rep.r2p_rot_err_deg = geom::rotation_distance_deg(fit.transform, world.base_from_phantom);
  rep.r2p_trans_err_mm = (fit.transform.translation() - world.base_from_phantom.translation()).norm();
  const auto r2p_errors =
      registration::fiducial_errors(world.phantom_fiducials, probed_base, invert(fit.transform));
  rep.rmse_r2p_mm =
      registration::rmse_fiducials(world.phantom_fiducials, probed_base, invert(fit.transform));
  rep.r2p_median_mm = metrics::lower_median(r2p_errors);
  rep.r2p_sd_mm = metrics::sample_sd(r2p_errors);

  // --- Hologram-to-phantom: 3 QR markers, graded on the ureter vertices ---
  registration::FiducialSet qr_holo("hmd");
  for (const auto& [name, p] : world.qr_markers.points)
    qr_holo.add(name, world.hmd_from_phantom.apply(p) + rng.normal_vec3(cfg.hologram_drift_sd_mm));
  const auto holo_fit = registration::svd_rigid_fit(world.qr_markers, qr_holo);
  rep.h2p_zero_redundancy = holo_fit.zero_redundancy;

  registration::FiducialSet vertices_holo("hmd");
  for (const auto& [name, p] : world.ureter_vertices.points)
    vertices_holo.add(name, holo_fit.transform.apply(p) + rng.normal_vec3(cfg.hologram_drift_sd_mm));
  const auto h2p_errors = registration::fiducial_errors(world.ureter_vertices, vertices_holo,
                                                        invert(world.hmd_from_phantom));
  rep.rmse_h2p_mm = registration::rmse_fiducials(world.ureter_vertices, vertices_holo,
                                                 invert(world.hmd_from_phantom));
  rep.h2p_median_mm = metrics::lower_median(h2p_errors);
  rep.h2p_sd_mm = metrics::sample_sd(h2p_errors);
  return rep;
}

CalibrationReport run_pipeline(const WorldTruth& world, const NoiseConfig& cfg) {
  return run_pipeline(world, cfg, robot::KinematicChain::default_7dof());
}

guidance::OperatorModel default_operator(Modality m, const NoiseConfig& cfg) {
  guidance::OperatorModel op;
  op.tremor_sd_mm = cfg.operator_tremor_sd_mm;
  switch (m) {
    case Modality::SM:
      op.perception_lat_sd_mm = 2.0;
      op.perception_rot_sd_deg = 1.0;
      op.insertion_drift_sd_deg = 2.0;
      op.align_overhead_mean_s = 195.0;
      op.align_overhead_sd_s = 40.0;
      break;
    case Modality::SG:
      op.perception_lat_sd_mm = 2.0;
      op.perception_rot_sd_deg = 1.0;
      op.insertion_drift_sd_deg = 0.0;
      op.align_overhead_mean_s = 125.0;
      op.align_overhead_sd_s = 35.0;
      break;
    case Modality::AM:
      op.perception_lat_sd_mm = 1.0;
      op.perception_rot_sd_deg = 0.45;
      op.insertion_drift_sd_deg = 3.6;
      op.align_overhead_mean_s = 50.0;
      op.align_overhead_sd_s = 15.0;
      break;
    case Modality::AG:
      op.perception_lat_sd_mm = 1.0;
      op.perception_rot_sd_deg = 0.45;
      op.insertion_drift_sd_deg = 0.0;
      op.align_overhead_mean_s = 115.0;
      op.align_overhead_sd_s = 35.0;
      break;
  }
  return op;
}

std::string ExperimentReport::formatted() const {
  std::ostringstream os;
  char buf[256];
  os << "Task completion comparison (median +- SD)\n";
  os << "  metric      ";
  for (const auto& g : stats) os << "  " << metrics::to_string(g.modality) << "              ";
  os << "\n";
  auto row = [&](const char* label, auto median_of, auto sd_of) {
    os << "  " << label;
    for (const auto& g : stats) {
      std::snprintf(buf, sizeof buf, "  %7.2f +- %-6.2f", median_of(g), sd_of(g));
      os << buf;
    }
    os << "\n";
  };
  row("E_T [mm]  ", [](const auto& g) { return g.median_e_t; }, [](const auto& g) { return g.sd_e_t; });
  row("E_O [deg] ", [](const auto& g) { return g.median_e_o; }, [](const auto& g) { return g.sd_e_o; });
  row("T_tot [s] ", [](const auto& g) { return g.median_t; }, [](const auto& g) { return g.sd_t; });
  os << "Pairwise Wilcoxon rank-sum (two-sided):\n";
  for (const auto& t : tests) {
    std::snprintf(buf, sizeof buf, "  %-9s %s vs %s  U = %8.1f  p = %.6g %s\n", t.metric.c_str(),
                  metrics::to_string(t.a).c_str(), metrics::to_string(t.b).c_str(), t.u, t.p,
                  std::string(static_cast<std::size_t>(t.stars), '*').c_str());
    os << buf;
  }
  os << "Operator presets are modeling assumptions, not measured human data.\n";
  return os.str();
}

ExperimentReport run_experiment(const WorldTruth& world, const NoiseConfig& cfg,
                                const ExperimentOptions& options) {
  cfg.validate();
  if (options.trials_per_modality < 1) throw ConfigError("trials per modality must be >= 1");
  if (options.modalities.empty()) throw ConfigError("no modalities requested");

  ExperimentReport rep;
  guidance::InsertionSetup setup = options.setup;
  setup.path.origin_mm = world.plan.entry;
  setup.path.axis = world.plan.v_p.normalized();
  setup.planned_length_mm = world.plan.v_p.norm();

  for (std::size_t mi = 0; mi < options.modalities.size(); ++mi) {
    const Modality m = options.modalities[mi];
    const guidance::OperatorModel op = default_operator(m, cfg);
    rep.presets.emplace_back(m, op);
    for (int k = 0; k < options.trials_per_modality; ++k) {
      const std::uint64_t trial_seed = mix_seed(cfg.seed, 0xE0 + mi * 1000003ULL + static_cast<std::uint64_t>(k));
      rep.trials.push_back(guidance::simulate_insertion(m, setup, op, trial_seed).result);
    }
  }

  std::sort(rep.trials.begin(), rep.trials.end(), [](const auto& a, const auto& b) {
    if (a.modality != b.modality) return static_cast<int>(a.modality) < static_cast<int>(b.modality);
    return a.seed < b.seed;
  });
  rep.stats = metrics::aggregate(rep.trials);

  auto values_of = [&](Modality m, auto field) {
    std::vector<double> v;
    for (const auto& t : rep.trials)
      if (t.modality == m) v.push_back(field(t));
    return v;
  };
  struct MetricDef {
    const char* name;
    double (*get)(const metrics::TrialResult&);
  };
  const MetricDef defs[] = {
      {"e_t_mm", [](const metrics::TrialResult& t) { return t.e_t_mm; }},
      {"e_o_deg", [](const metrics::TrialResult& t) { return t.e_o_deg; }},
      {"t_total_s", [](const metrics::TrialResult& t) { return t.t_total_s; }},
  };
  for (const auto& def : defs) {
    for (std::size_t i = 0; i < options.modalities.size(); ++i) {
      for (std::size_t j = i + 1; j < options.modalities.size(); ++j) {
        PairwiseTest t;
        t.metric = def.name;
        t.a = options.modalities[i];
        t.b = options.modalities[j];
        const auto res = metrics::wilcoxon_ranksum(values_of(t.a, def.get), values_of(t.b, def.get));
        t.u = res.u;
        t.p = res.p;
        t.stars = metrics::significance_stars(res.p);
        rep.tests.push_back(t);
      }
    }
  }
  return rep;
}

}  // namespace pnav::scenario
