#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdimlab/entropy.hpp"
#include "mdimlab/measures.hpp"

namespace mdimlab {

// n-block source with a reproduction codebook and the per-symbol p-th power
// cost c[x][y] = (1/n) sum_k d(x_k, y_k)^p.
struct DistortionProblem {
  int n = 1;
  double p = 1.0;
  double alphabet_diam = 1.0;
  std::vector<double> source_probs;     // positive, sum 1
  std::vector<uint64_t> source_words;
  std::vector<uint64_t> repro_words;
  std::vector<double> cost;             // row-major n_source x n_repro
  bool repro_covers_support = true;

  int n_source() const { return int(source_probs.size()); }
  int n_repro() const { return int(repro_words.size()); }
  double c(int x, int y) const { return cost[size_t(x) * n_repro() + y]; }
  // Best constant-reproduction distortion: min_y E[c(X, y)].
  double min_constant_distortion() const;
  double source_entropy() const;  // nats, whole block

  // Reproduction codebook defaults to the source support; the enriched
  // variant uses every admissible n-word, budget-guarded.
  enum class Repro { support, full };
  static DistortionProblem from_measure(const MeasureSpec& mu, int n, double p,
                                        Repro repro = Repro::support,
                                        long long budget = kDefaultBlockBudget);
};

// I(X;Y) of a joint law given as a row-major matrix; entries >= 0, sum 1.
double mutual_information(const std::vector<double>& joint, int rows, int cols);

struct BAPoint {
  double beta = 0.0;
  double distortion = 0.0;  // E[(1/n) sum d^p]
  double rate = 0.0;        // I(X;Y) / n, nats per symbol
  int iters = 0;
  bool converged = true;
};

// Alternating-minimization solver for min I + beta * E[cost]. The Lagrangian
// is checked to be nonincreasing across iterations; non-convergence is
// reported, never silent.
BAPoint blahut_arimoto(const DistortionProblem& prob, double beta, double tol = 1e-12,
                       int max_iter = 20000);

struct SweepOptions {
  double beta_lo = 1.0 / 64.0;  // 2^-6
  double beta_hi = 4096.0;      // 2^12
  int initial_points = 33;
  int max_points = 160;
  double refine_distortion_gap = 0.0;  // 0 = default heuristic
};

// Swept rate-distortion curve, sorted by distortion; includes the exact
// beta -> 0 endpoint (R = 0 at the best constant reproduction).
struct RDCurve {
  int n = 1;
  double p = 1.0;
  std::vector<BAPoint> points;

  void insert_sorted(const BAPoint& pt);
  // Discrete convexity / monotonicity residuals of R as a function of D.
  double worst_monotonicity_violation() const;
  double worst_convexity_violation() const;
};

RDCurve sweep_rd_curve(const DistortionProblem& prob, const SweepOptions& opts = {});

struct CurveQuery {
  double value = 0.0;
  BAPoint below, above;  // bracketing curve points
  bool exact_zero = false;
};

// Rate (nats/symbol) at the target per-symbol distortion, refining the sweep
// adaptively around the bracket. Returns exact 0 beyond the constant-
// reproduction distortion.
CurveQuery rate_at_distortion(RDCurve& curve, const DistortionProblem& prob,
                              double distortion_target, double tol = 1e-6);
// Distortion at the target per-symbol rate budget.
CurveQuery distortion_at_rate(RDCurve& curve, const DistortionProblem& prob,
                              double rate_target, double tol = 1e-7);

struct RdValue {
  double rate = 0.0;
  CurveQuery bracket;
};

// R-tilde(n, eps): per-symbol rate at the distortion budget eps^p. Exactly 0
// for eps >= diam(A) (constant reproduction meets the budget).
RdValue rd_value(const MeasureSpec& mu, int n, double p, double eps,
                 DistortionProblem::Repro repro = DistortionProblem::Repro::support);

struct PerNTable {
  std::vector<int> ns;
  std::vector<double> values;
  std::vector<double> running_min;
  double value = 0.0;  // min over the computed n (upper bound for the limit)
};

PerNTable rd_limit_estimate(const MeasureSpec& mu, double p, double eps, int n_lo, int n_hi);

// D(R, n): p-th root of the least distortion at per-symbol rate budget R.
double distortion_rate(const MeasureSpec& mu, int n, double p, double rate_budget);

struct CheckRow {
  double x = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  bool ok = true;
  std::string note;
};

struct CheckReport {
  std::string name;
  std::vector<CheckRow> rows;
  bool all_ok = true;
  double tolerance = 0.0;
};

// |R(D(R)) - R| <= tol on the grid, plus monotonicity and discrete convexity
// of both curves.
CheckReport rd_inverse_check(const MeasureSpec& mu, int n, double p,
                             const std::vector<double>& rate_grid, double tol = 1e-3);

// D_mix(R, n) <= sum_i w_i D_i(R, n) + tol on the grid (finite-n surrogate of
// the ergodic-decomposition inequality); R = 0 rows are evaluated exactly.
CheckReport decomposition_inequality_check(const MeasureSpec& mu, int n, double p,
                                           const std::vector<double>& rate_grid,
                                           double tol = 1e-6);

struct DominanceRow {
  double distortion = 0.0;
  double mixture_rate = 0.0;
  double max_component_rate = 0.0;
  int dominating_component = -1;
  bool ok = true;
};

struct DominanceReport {
  std::vector<DominanceRow> rows;
  std::vector<std::string> component_labels;
  bool all_ok = true;
  double tolerance = 0.0;
};

// R_mix(D, n) <= max_i R_i(D, n) + tol, naming the dominating component.
DominanceReport ergodic_dominance_check(const MeasureSpec& mu, double p,
                                        const std::vector<double>& distortion_grid, int n,
                                        double tol = 1e-3);

// R(n, eps) / log(1/eps) table with slope fit; rows with eps below the
// alphabet resolution are flagged as saturated.
DimensionEstimate rd_dimension(const MeasureSpec& mu, double p, std::vector<double> eps_grid,
                               int n);

}  // namespace mdimlab
