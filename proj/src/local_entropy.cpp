#include "mdimlab/local_entropy.hpp"

#include <algorithm>
#include <cmath>

namespace mdimlab {

std::string to_string(BallMode m) {
  return m == BallMode::exact_cylinder ? "exact_cylinder" : "enumerated";
}

BallMeasure bowen_ball_measure(const MeasureSpec& mu, const ShiftWindowSystem& sys,
                               const Word& center, int n, double eps, long long budget) {
  if (eps <= 0) throw std::domain_error("bowen_ball_measure: eps must be positive");
  if (n < 1 || n > sys.horizon)
    throw std::invalid_argument("bowen_ball_measure: n must lie in [1, horizon]");
  if (int(center.size()) < sys.window + n)
    throw std::invalid_argument("bowen_ball_measure: center too short");

  const double gap = sys.alphabet.gap();
  const double tail = sys.tail_bound();
  BallMeasure out;
  if (tail < eps && eps <= gap) {
    // Points agreeing with the center on [0, n) stay within the window tails
    // (< eps); any disagreement there already costs >= gap (>= eps).
    std::vector<uint8_t> block(center.begin() + sys.window, center.begin() + sys.window + n);
    out.value = cylinder_probability(mu, block);
    out.mode = BallMode::exact_cylinder;
    return out;
  }

  // Enumerated windowed ball.
  if (int(center.size()) != sys.word_length())
    throw std::invalid_argument("bowen_ball_measure: enumerated mode needs full-window center");
  auto words = sys.enumerate_words(/*cyclic=*/false, budget);
  const int L = sys.word_length();
  double mass = 0;
  std::vector<uint8_t> full(L);
  for (const auto& w : words) {
    if (sys.bowen(center, w, n) < eps) {
      std::copy(w.begin(), w.end(), full.begin());
      mass += cylinder_probability(mu, full);
    }
  }
  out.value = mass;
  out.mode = BallMode::enumerated;
  return out;
}

BrinKatokResult brin_katok_estimate(const MeasureSpec& mu, const ShiftWindowSystem& sys,
                                    double eps, int n_lo, int n_hi, int centers,
                                    uint64_t seed, bool allow_nonergodic) {
  if (centers < 3) throw std::invalid_argument("brin_katok_estimate: need >= 3 centers");
  if (n_lo < 1 || n_hi < n_lo || n_hi > sys.horizon)
    throw std::invalid_argument("brin_katok_estimate: bad n range");
  if (!mu.is_ergodic() && !allow_nonergodic)
    throw std::invalid_argument(
        "brin_katok_estimate: measure is not ergodic; set allow_nonergodic to force");

  BrinKatokResult res;
  std::vector<double> slopes;
  for (int c = 0; c < centers; ++c) {
    Word center = sample_orbit(mu, sys.word_length(), seed, uint64_t(c));
    BallDecaySeries s;
    s.center_id = c;
    s.center = center;
    s.eps = eps;
    std::vector<double> xs, ys;
    double prev_log = 0;
    bool monotone = true;
    for (int n = n_lo; n <= n_hi; ++n) {
      BallMeasure bm = bowen_ball_measure(mu, sys, center, n, eps);
      s.mode = bm.mode;
      double neg_log = -std::log(std::max(bm.value, 1e-300));
      if (n > n_lo && neg_log < prev_log - 1e-12) monotone = false;
      prev_log = neg_log;
      s.per_n.push_back({n, neg_log / double(n)});
      xs.push_back(double(n));
      ys.push_back(neg_log);
    }
    if (!monotone)
      throw std::logic_error("brin_katok_estimate: ball measures increased with n");
    s.hbk = xs.size() >= 2 ? least_squares(xs, ys).slope : ys[0] / xs[0];
    s.hbk = std::max(0.0, s.hbk);
    slopes.push_back(s.hbk);
    res.series.push_back(std::move(s));
  }
  std::vector<double> sorted = slopes;
  std::sort(sorted.begin(), sorted.end());
  size_t k = sorted.size();
  res.hbk = k % 2 == 1 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
  res.spread = sorted.back() - sorted.front();
  return res;
}

LocalEntropyCheck local_entropy_partition_check(const MeasureSpec& mu,
                                                const ShiftWindowSystem& sys, double eps,
                                                const PartitionFamilyOptions& family,
                                                int n_max, int centers, uint64_t seed,
                                                double tol) {
  PartitionFamilyOptions strict = family;
  strict.strict = true;  // diameter strictly below eps here
  LocalEntropyCheck out;
  out.tolerance = tol;
  out.hbk = brin_katok_estimate(mu, sys, eps, 1, std::min(n_max, sys.horizon), centers, seed).hbk;
  out.partition_bound = inf_entropy_small_partitions(mu, eps, strict, n_max).value;
  out.holds = out.hbk <= out.partition_bound + tol;
  out.note = "partition side is an upper bound on the infimum";
  return out;
}

BallBoundReport ball_measure_bound_check(const MeasureSpec& mu, const ShiftWindowSystem& sys,
                                         double eps, double delta, double mdim_est,
                                         int n_lo, int n_hi, int centers, uint64_t seed) {
  if (delta <= 0) throw std::invalid_argument("ball_measure_bound_check: delta must be > 0");
  BallBoundReport rep;
  rep.eps = eps;
  rep.delta = delta;
  rep.mdim_estimate = mdim_est;
  rep.note = "empirical evidence only";

  // eps_0 proxy: the scale must already see the claimed dimension.
  ShiftCountingOracle oracle(sys);
  GrowthSeries g = growth_rate(oracle, eps, std::max(1, n_lo), std::min(n_hi, sys.horizon));
  double ratio = g.rate / std::log(1.0 / eps);
  rep.proxy_gap = ratio - (mdim_est + delta / 2.0);
  rep.inside_proxy = (eps <= sys.alphabet.gap() / 2.0) && (rep.proxy_gap <= 0);

  double log_eps = std::log(eps);
  for (int c = 0; c < centers; ++c) {
    Word center = sample_orbit(mu, sys.word_length(), seed, uint64_t(c));
    BallBoundRow row;
    row.center_id = c;
    for (int n = n_lo; n <= std::min(n_hi, sys.horizon); ++n) {
      double lhs = std::log(std::max(bowen_ball_measure(mu, sys, center, n, eps).value, 1e-300));
      double rhs = double(n) * (mdim_est + delta) * log_eps;
      if (lhs < rhs - 1e-12) {
        row.first_failing_n = n;
        row.ok = false;
        rep.bound_holds = false;
        break;
      }
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace mdimlab
