#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mdimlab/common.hpp"

namespace mdimlab {

// Finite metric space with a bijective dynamics map. Distances are stored as
// a dense symmetric table, so this type is only meant for spaces small enough
// to tabulate (see kMaxTablePoints).
struct FiniteMetricSystem {
  int count = 0;
  std::vector<double> dist;      // row-major count x count
  std::vector<int> dynamics;     // permutation of 0..count-1
  double diam = 0.0;
  std::string label;

  static constexpr int kMaxTablePoints = 4096;

  // Validates symmetry, zero diagonal, triangle inequality (exhaustive for
  // count <= 200, sampled above) and that dynamics is a permutation.
  static FiniteMetricSystem create(std::vector<double> dist, std::vector<int> dynamics,
                                   std::string label);

  double d(int i, int j) const { return dist[size_t(i) * count + j]; }
  int forward(int i) const { return dynamics[i]; }
  bool identity_dynamics() const;
  bool isometric_dynamics(double tol = 1e-12) const;
  double min_positive_distance() const;
};

// max_{0 <= k < n} d(T^k i, T^k j)
double bowen_distance(const FiniteMetricSystem& sys, int i, int j, int n);

// Dense n-step Bowen distance table.
std::vector<double> bowen_matrix(const FiniteMetricSystem& sys, int n);

struct Cover {
  std::vector<std::vector<int>> sets;  // point indices; union must be everything
};

// Largest diameter of a cover element under the given metric table.
double cover_diameter(const FiniteMetricSystem& sys, const Cover& cover);

// Largest candidate radius r (from {distances} U {distances/2}) such that
// every open ball B(x, r) is contained in some cover element. Exact on finite
// spaces: the containment predicate only changes at distance values.
double lebesgue_number(const FiniteMetricSystem& sys, const Cover& cover);

// eps/4-net + open eps/2-balls construction; the result always satisfies
// cover_diameter <= eps and lebesgue_number >= eps/4.
Cover lebesgue_cover(const FiniteMetricSystem& sys, double eps);

struct CoveringOptions {
  int exact_max_points = 24;       // try exact mode only up to this many points
  int exact_max_candidates = 18;   // ... and this many deduplicated maximal cliques
  int clique_enum_cap = 200000;    // hard stop for clique enumeration
};

struct CountResult {
  long long lower = 1;   // certified lower bound (packing); clamped when huge
  long long upper = 1;   // certified upper bound (explicit cover); clamped
  double log_lo = 0.0;   // log of the bounds; authoritative for huge counts
  double log_hi = 0.0;
  bool exact = false;    // lower == upper == minimum cover size
  std::string method;

  static CountResult from_counts(long long lo, long long hi, bool exact, std::string method);
  static CountResult from_logs(double log_lo, double log_hi, bool exact, std::string method);

  long long value() const { return upper; }
  double log_lower() const { return log_lo; }
  double log_upper() const { return log_hi; }
};

using DistFn = std::function<double(int, int)>;

// Minimal number of diameter-<=eps sets covering {0..count-1}. Exact via
// branch-and-bound set cover over maximal diameter-cliques when the instance
// is small enough, otherwise a greedy-net upper bound plus packing lower
// bound. eps <= 0 is a domain error.
CountResult covering_number(int count, const DistFn& d, double eps,
                            const CoveringOptions& opts = {});
CountResult covering_number(const FiniteMetricSystem& sys, double eps,
                            const CoveringOptions& opts = {});
// Covering number under the n-step Bowen metric.
CountResult bowen_covering_number(const FiniteMetricSystem& sys, double eps, int n,
                                  const CoveringOptions& opts = {});

// Maximal >eps-separated set found greedily (certified packing lower bound).
std::vector<int> greedy_packing(int count, const DistFn& d, double eps);
// Greedy net of closed eps/2-balls (certified covering upper bound).
std::vector<int> greedy_net_centers(int count, const DistFn& d, double eps);

struct JoinCount {
  long long value = 0;
  bool exact = false;
  std::string method;
};

// Minimal subcover cardinality N(U^n) of the n-fold dynamical join
// U v T^{ -1}U v ... v T^{-(n-1)}U. Exact when the join cells form a small
// set-cover instance (always when the cover is a partition), greedy otherwise.
JoinCount cover_join_count(const FiniteMetricSystem& sys, const Cover& cover, int n,
                           const CoveringOptions& opts = {});

enum class Provenance { exact, upper_bound, lower_bound, estimate };
std::string to_string(Provenance p);

struct SandwichRow {
  int n = 0;
  CountResult cover_at_diam;  // #(X, rho_n, diam U)
  JoinCount join;             // N(U^n)
  CountResult cover_at_leb;   // #(X, rho_n, Leb U)
  bool left_certified = false;   // upper(#diam) <= N
  bool right_certified = false;  // N <= lower(#leb)
};

struct SandwichReport {
  double diam_u = 0.0;
  double leb_u = 0.0;
  std::vector<SandwichRow> rows;
  bool all_hold = false;
  bool skipped = false;
  std::string note;
};

// Verifies #(X, rho_n, diam U) <= N(U^n) <= #(X, rho_n, Leb U) for n <= n_max.
// Requires exact covering mode; larger systems are reported as skipped.
SandwichReport sandwich_check(const FiniteMetricSystem& sys, const Cover& cover, int n_max,
                              const CoveringOptions& opts = {});

// Per-(n) covering-count source used by growth-rate extrapolation. Lets the
// caller plug in either enumerated counts or combinatorial brackets.
class CoveringCounter {
 public:
  virtual ~CoveringCounter() = default;
  virtual CountResult count(int n, double eps) const = 0;
  virtual std::string describe() const = 0;
};

class EnumeratedCounter : public CoveringCounter {
 public:
  EnumeratedCounter(const FiniteMetricSystem& sys, CoveringOptions opts = {})
      : sys_(&sys), opts_(opts) {}
  CountResult count(int n, double eps) const override;
  std::string describe() const override { return "enumerated:" + sys_->label; }

 private:
  const FiniteMetricSystem* sys_;
  CoveringOptions opts_;
};

enum class RateMethod { slope_fit, last_ratio, fekete_min };

// log #(X, rho_n, eps) per n together with three growth-rate extrapolations.
// Lower/upper tracks coincide when every count is exact.
struct GrowthSeries {
  double eps = 0.0;
  std::vector<int> ns;
  std::vector<double> log_lower;
  std::vector<double> log_upper;
  bool exact = false;
  std::string method;

  double rate_lower = 0.0;   // slope fit on lower counts (top half of n range)
  double rate_upper = 0.0;   // slope fit on upper counts
  double rate = 0.0;         // default estimator: slope fit (midpoint of the two)
  double fekete_lower = 0.0; // min_n (1/n) log lower
  double fekete_upper = 0.0; // min_n (1/n) log upper; valid upper bound when exact
  double last_ratio = 0.0;   // log#(n_hi) - log#(n_hi - 1), on upper counts

  double bracket_width() const;  // |rate_upper - rate_lower| / max(rate_lower, tiny)
};

GrowthSeries growth_rate(const CoveringCounter& counter, double eps, int n_lo, int n_hi);
GrowthSeries growth_rate(const FiniteMetricSystem& sys, double eps, int n_lo, int n_hi,
                         const CoveringOptions& opts = {});

struct TameRow {
  double eps = 0.0;
  double delta = 0.0;
  double value = 0.0;  // eps^delta * log #(X, rho, eps)
};

struct TameVerdict {
  double delta = 0.0;
  bool trending_to_zero = false;
  std::string note;
};

struct TameReport {
  std::vector<TameRow> rows;
  std::vector<TameVerdict> verdicts;
};

// Diagnostic table for eps^delta log #(X, rho, eps) over a decreasing eps
// grid. Purely descriptive: flags the monotone trend, asserts no limit.
TameReport tame_growth_table(const std::vector<std::pair<double, CountResult>>& counts,
                             const std::vector<double>& deltas);

}  // namespace mdimlab
