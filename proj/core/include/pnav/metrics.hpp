#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pnav/geom.hpp"

namespace pnav::metrics {

enum class Modality { SM, SG, AM, AG };

std::string to_string(Modality m);
Modality modality_from_string(const std::string& s);

/// Planned insertion path: entry point and planned needle vector from entry
/// to target, so target = entry + v_p by construction.
struct PathSpec {
  geom::Point3 entry = geom::Point3::Zero();
  geom::Vec3 v_p = geom::Vec3::UnitZ();  // mm, entry -> target

  geom::Point3 target() const { return entry + v_p; }
};

/// Observed needle after execution: end-effector position and the real
/// needle vector from the end effector to the tip.
struct NeedleObservation {
  geom::Point3 base = geom::Point3::Zero();
  geom::Vec3 v_r = geom::Vec3::UnitZ();
};

struct PathErrors {
  double e_t_mm = 0.0;
  double e_o_deg = 0.0;
};

/// Where the projected tip P is anchored when planned and real needles do
/// not share an origin. ObservedBase anchors both at the observation base
/// (default); PlannedEntry anchors at the plan's entry point.
enum class AnchorMode { ObservedBase, PlannedEntry };

/// Orientation and translation error between planned and real needle:
/// E_O = acos(v_p . v_r / |v_p||v_r|), P = anchor + |v_p| cos(E_O) v_r/|v_r|,
/// E_T = ||P - target||. Throws ZeroVector when either vector is null.
PathErrors path_errors(const PathSpec& plan, const NeedleObservation& obs,
                       AnchorMode anchor = AnchorMode::ObservedBase);

struct TrialResult {
  Modality modality = Modality::SM;
  double e_t_mm = 0.0;
  double e_o_deg = 0.0;
  double t_total_s = 0.0;
  std::uint64_t seed = 0;
};

struct GroupStats {
  Modality modality = Modality::SM;
  std::size_t n = 0;
  double median_e_t = 0.0, sd_e_t = 0.0;
  double median_e_o = 0.0, sd_e_o = 0.0;
  double median_t = 0.0, sd_t = 0.0;
};

/// Lower median: for even n the lower of the two central order statistics.
double lower_median(std::vector<double> values);

/// Sample standard deviation (n-1 denominator, 0 for n <= 1).
double sample_sd(const std::vector<double>& values);

/// Per-modality median and SD of e_t, e_o and t_total, ordered SM, SG, AM,
/// AG (only modalities that appear). Throws EmptyGroup on empty input.
std::vector<GroupStats> aggregate(const std::vector<TrialResult>& trials);

struct RankSumResult {
  double u = 0.0;  // min(U_a, U_b) with mid-rank ties
  double p = 1.0;  // two-sided
  bool exact = false;
};

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) test. Exact p by counting all
/// C(n_a+n_b, n_a) group assignments of the pooled mid-ranks when
/// n_a + n_b <= 20, normal approximation with tie and continuity correction
/// above that. Throws EmptySample.
RankSumResult wilcoxon_ranksum(const std::vector<double>& a, const std::vector<double>& b);

/// Significance stars at the p < 0.05 / 0.01 / 0.001 levels (0..3).
int significance_stars(double p);

}  // namespace pnav::metrics
