#pragma once

#include <string>
#include <vector>

#include "mdimlab/entropy.hpp"
#include "mdimlab/measures.hpp"
#include "mdimlab/shift_space.hpp"

namespace mdimlab {

enum class BallMode { exact_cylinder, enumerated };
std::string to_string(BallMode m);

struct BallMeasure {
  double value = 0.0;
  BallMode mode = BallMode::exact_cylinder;
};

// mu(B_n(x, eps)) for B_n = {y : rho_n(x, y) < eps} on the windowed shift.
// When tail_bound < eps <= gap the ball is the [0,n)-cylinder of the center
// up to window tails and its mass is the exact cylinder probability;
// otherwise the windowed ball is enumerated (budget-guarded).
BallMeasure bowen_ball_measure(const MeasureSpec& mu, const ShiftWindowSystem& sys,
                               const Word& center, int n, double eps,
                               long long budget = 1 << 16);

struct BallDecaySeries {
  int center_id = 0;
  Word center;
  double eps = 0.0;
  std::vector<std::pair<int, double>> per_n;  // (n, -(1/n) log mu(B_n))
  double hbk = 0.0;                           // slope of -log mu(B_n) vs n
  BallMode mode = BallMode::exact_cylinder;
};

struct BrinKatokResult {
  double hbk = 0.0;    // median across centers
  double spread = 0.0; // max - min across centers
  std::vector<BallDecaySeries> series;
};

// Per-center decay series with centers sampled from mu; requires an ergodic
// measure (or the explicit per-component override).
BrinKatokResult brin_katok_estimate(const MeasureSpec& mu, const ShiftWindowSystem& sys,
                                    double eps, int n_lo, int n_hi, int centers,
                                    uint64_t seed, bool allow_nonergodic = false);

struct LocalEntropyCheck {
  double hbk = 0.0;
  double partition_bound = 0.0;  // family infimum with strict diameter < eps
  double tolerance = 0.0;
  bool holds = false;
  std::string note;
};

// hbk(eps) <= inf over diameter-<eps partitions of the entropy rate (the
// right side is itself an upper bound on the infimum, which only makes the
// check stronger).
LocalEntropyCheck local_entropy_partition_check(const MeasureSpec& mu,
                                                const ShiftWindowSystem& sys, double eps,
                                                const PartitionFamilyOptions& family,
                                                int n_max, int centers, uint64_t seed,
                                                double tol = 1e-2);

struct BallBoundRow {
  int center_id = 0;
  int first_failing_n = -1;  // -1 when the bound holds for every checked n
  bool ok = true;
};

struct BallBoundReport {
  double eps = 0.0;
  double delta = 0.0;
  double mdim_estimate = 0.0;
  bool inside_proxy = false;   // eps below the working eps_0 proxy
  double proxy_gap = 0.0;      // S(eps)/log(1/eps) - (mdim + delta/2)
  std::vector<BallBoundRow> rows;
  bool bound_holds = true;
  std::string note;  // always labeled empirical evidence
};

// Checks mu(B_n(x, eps)) >= eps^{n (mdim_est + delta)} for sampled centers.
// The eps_0 proxy: eps <= gap/2 and S(eps)/log(1/eps) within delta/2 of the
// supplied mdim estimate; results outside the proxy are flagged as such.
BallBoundReport ball_measure_bound_check(const MeasureSpec& mu, const ShiftWindowSystem& sys,
                                         double eps, double delta, double mdim_est,
                                         int n_lo, int n_hi, int centers, uint64_t seed);

}  // namespace mdimlab
