#include "pnav/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace pnav::metrics {

std::string to_string(Modality m) {
  switch (m) {
    case Modality::SM: return "SM";
    case Modality::SG: return "SG";
    case Modality::AM: return "AM";
    case Modality::AG: return "AG";
  }
  return "??";
}

Modality modality_from_string(const std::string& s) {
  if (s == "SM") return Modality::SM;
  if (s == "SG") return Modality::SG;
  if (s == "AM") return Modality::AM;
  if (s == "AG") return Modality::AG;
  throw ConfigError("unknown modality '" + s + "' (expected SM, SG, AM or AG)");
}

PathErrors path_errors(const PathSpec& plan, const NeedleObservation& obs, AnchorMode anchor) {
  const double norm_p = plan.v_p.norm();
  const double norm_r = obs.v_r.norm();
  if (norm_p < 1e-6) throw ZeroVector("planned needle vector is null");
  if (norm_r < 1e-6) throw ZeroVector("real needle vector is null");

  const double cos_eo = std::clamp(plan.v_p.dot(obs.v_r) / (norm_p * norm_r), -1.0, 1.0);
  const double e_o_rad = std::acos(cos_eo);

  const geom::Point3 anchor_pt = (anchor == AnchorMode::ObservedBase) ? obs.base : plan.entry;
  const geom::Point3 projected = anchor_pt + norm_p * cos_eo * (obs.v_r / norm_r);
  const geom::Point3 target = (anchor == AnchorMode::ObservedBase)
                                  ? geom::Point3(obs.base + plan.v_p)
                                  : plan.target();

  PathErrors out;
  out.e_o_deg = geom::rad_to_deg(e_o_rad);
  out.e_t_mm = (projected - target).norm();
  return out;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw EmptyGroup("median of empty set");
  const std::size_t k = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
  return values[k];
}

double sample_sd(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n <= 1) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

std::vector<GroupStats> aggregate(const std::vector<TrialResult>& trials) {
  if (trials.empty()) throw EmptyGroup("no trials to aggregate");

  std::vector<GroupStats> out;
  for (Modality m : {Modality::SM, Modality::SG, Modality::AM, Modality::AG}) {
    std::vector<double> e_t, e_o, t_tot;
    for (const auto& t : trials) {
      if (t.modality != m) continue;
      e_t.push_back(t.e_t_mm);
      e_o.push_back(t.e_o_deg);
      t_tot.push_back(t.t_total_s);
    }
    if (e_t.empty()) continue;
    GroupStats g;
    g.modality = m;
    g.n = e_t.size();
    g.median_e_t = lower_median(e_t);
    g.sd_e_t = sample_sd(e_t);
    g.median_e_o = lower_median(e_o);
    g.sd_e_o = sample_sd(e_o);
    g.median_t = lower_median(t_tot);
    g.sd_t = sample_sd(t_tot);
    out.push_back(g);
  }
  return out;
}

namespace {

// Doubled mid-ranks of the pooled sample are integers, which keeps the
// exact path free of floating-point tie ambiguity.
std::vector<long> doubled_midranks(const std::vector<double>& pooled_sorted) {
  const std::size_t n = pooled_sorted.size();
  std::vector<long> out(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled_sorted[j + 1] == pooled_sorted[i]) ++j;
    // positions i+1 .. j+1 (1-based); doubled mid-rank = (i+1) + (j+1)
    const long doubled = static_cast<long>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) out[k] = doubled;
    i = j + 1;
  }
  return out;
}

// Exact two-sided p: over all C(N, n_a) assignments of the pooled mid-ranks
// to group a, the fraction whose U deviates from the null mean by at least
// the observed amount. Dynamic programming over (subset size, doubled rank
// sum) counts every assignment without materializing them.
double exact_two_sided_p(const std::vector<long>& doubled_ranks, std::size_t n_a, long doubled_u_obs) {
  const std::size_t n = doubled_ranks.size();
  const std::size_t n_b = n - n_a;
  long total_doubled = 0;
  for (long r : doubled_ranks) total_doubled += r;

  // dp[k][s] = number of k-subsets with doubled rank-sum s
  std::vector<std::vector<double>> dp(n_a + 1, std::vector<double>(static_cast<std::size_t>(total_doubled) + 1, 0.0));
  dp[0][0] = 1.0;
  for (std::size_t item = 0; item < n; ++item) {
    const long r = doubled_ranks[item];
    const std::size_t kmax = std::min(item + 1, n_a);
    for (std::size_t k = kmax; k >= 1; --k) {
      auto& row = dp[k];
      const auto& prev = dp[k - 1];
      for (long s = total_doubled; s >= r; --s)
        row[static_cast<std::size_t>(s)] += prev[static_cast<std::size_t>(s - r)];
    }
  }

  const long doubled_mean = static_cast<long>(n_a) * static_cast<long>(n_b);  // 2 * n_a n_b / 2
  const long dev_obs = std::labs(doubled_u_obs - doubled_mean);

  double extreme = 0.0, total = 0.0;
  const long min_w = static_cast<long>(n_a * (n_a + 1));  // doubled min rank-sum term
  for (long s = 0; s <= total_doubled; ++s) {
    const double count = dp[n_a][static_cast<std::size_t>(s)];
    if (count == 0.0) continue;
    total += count;
    const long doubled_u = s - min_w;
    if (std::labs(doubled_u - doubled_mean) >= dev_obs) extreme += count;
  }
  return extreme / total;
}

}  // namespace

RankSumResult wilcoxon_ranksum(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw EmptySample("both samples must be non-empty");

  const std::size_t n_a = a.size(), n_b = b.size(), n = n_a + n_b;

  struct Tagged {
    double value;
    bool from_a;
  };
  std::vector<Tagged> pooled;
  pooled.reserve(n);
  for (double v : a) pooled.push_back({v, true});
  for (double v : b) pooled.push_back({v, false});
  std::sort(pooled.begin(), pooled.end(), [](const Tagged& x, const Tagged& y) { return x.value < y.value; });

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = pooled[i].value;
  const std::vector<long> dranks = doubled_midranks(values);

  long doubled_w_a = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (pooled[i].from_a) doubled_w_a += dranks[i];
  const long doubled_u_a = doubled_w_a - static_cast<long>(n_a * (n_a + 1));
  const double u_a = static_cast<double>(doubled_u_a) / 2.0;
  const double u_b = static_cast<double>(n_a) * static_cast<double>(n_b) - u_a;

  RankSumResult out;
  out.u = std::min(u_a, u_b);

  if (n <= 20) {
    out.exact = true;
    out.p = exact_two_sided_p(dranks, n_a, doubled_u_a);
    return out;
  }

  // Normal approximation with tie correction and continuity correction.
  const double mean = static_cast<double>(n_a) * static_cast<double>(n_b) / 2.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[j + 1] == values[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  const double nn = static_cast<double>(n);
  const double var = (static_cast<double>(n_a) * static_cast<double>(n_b) / 12.0) *
                     ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (var <= 0.0) {
    out.p = 1.0;
    return out;
  }
  const double z = std::max(0.0, std::abs(u_a - mean) - 0.5) / std::sqrt(var);
  out.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return out;
}

int significance_stars(double p) {
  if (p < 0.001) return 3;
  if (p < 0.01) return 2;
  if (p < 0.05) return 1;
  return 0;
}

}  // namespace pnav::metrics
