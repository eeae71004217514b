#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdimlab/metric_space.hpp"

namespace mdimlab {

// Finite alphabet embedded in [0,1] with the absolute-difference metric.
struct Alphabet {
  std::vector<double> symbols;  // strictly increasing, inside [0,1]

  static Alphabet evenly_spaced(int m);  // {0, 1/(m-1), ..., 1}; m=1 -> {0}

  int size() const { return int(symbols.size()); }
  double d(int a, int b) const { return std::abs(symbols[a] - symbols[b]); }
  double diam() const { return symbols.back() - symbols.front(); }
  double gap() const;  // min adjacent difference; +inf for a single symbol
  void validate() const;
};

using Word = std::vector<uint8_t>;

// A shift space truncated to the coordinate window [-W, horizon + W). Points
// are words on that window; the left shift acts by cyclic rotation (periodic
// extension of the vacated coordinate), which keeps the dynamics bijective.
// All reported Bowen distances agree with the untruncated shift up to
// tail_bound().
struct ShiftWindowSystem {
  Alphabet alphabet;
  int window = 0;   // W
  int horizon = 1;  // n_max
  std::vector<std::vector<int>> adjacency;  // empty => full shift
  std::string label;

  int word_length() const { return horizon + 2 * window; }
  bool full_shift() const { return adjacency.empty(); }
  double tail_bound() const;

  // Admissible linear words of the given length (transfer-matrix count for
  // subshifts, m^len for the full shift).
  double log_linear_word_count(int len) const;
  long long linear_word_count(int len) const;  // throws resource_error on overflow

  // Words admissible under cyclic wrap (the point set of the metric system).
  std::vector<Word> enumerate_words(bool cyclic, long long budget) const;

  // Product metric at time 0: sum_j d(x_j, y_j) / 2^{|j|} over the window.
  double rho(const Word& x, const Word& y) const;
  // Wrap-dynamics Bowen metric: max over 0 <= k < n of rho after k cyclic
  // left shifts.
  double bowen(const Word& x, const Word& y, int n) const;
  Word shifted(const Word& x, int k) const;  // cyclic left shift

  // Exact (full shift) or upper-bound (subshift) rho_n-diameter of the
  // cylinder fixing original coordinates [a0, b0), wrap-aware.
  double cylinder_diameter(int a0, int b0, int n) const;

  // Certified covering-count bounds that need no enumeration.
  struct PackingCertificate {
    long long count = 1;
    bool valid = false;
    std::string reason;
  };
  // Lower bound on #(X, rho_n, eps): distinct admissible [0,n)-blocks are
  // pairwise > eps separated when eps < gap; at eps == gap a parity
  // coordinate restores strict separation (full shift, window >= n).
  PackingCertificate packing_lower(double eps, int n) const;

  struct CylinderUpper {
    int a0 = 0, b0 = 0;
    double log_count = 0.0;
    double diameter = 0.0;
  };
  // Upper bound on #(X, rho_n, eps) from the coarsest cylinder partition
  // whose cells have rho_n-diameter <= eps.
  CylinderUpper cylinder_upper(double eps, int n) const;

  // Table-backed conversion (cyclically admissible words + wrap permutation).
  FiniteMetricSystem to_metric_system(long long budget = FiniteMetricSystem::kMaxTablePoints) const;

  Word constant_word(uint8_t symbol) const;
  std::vector<uint8_t> block_of(const Word& w, int n) const;  // coordinates [0, n)
};

ShiftWindowSystem build_full_shift(int m, int window, int horizon,
                                   long long word_budget = 1LL << 62);
ShiftWindowSystem build_sft(std::vector<std::vector<int>> adjacency, Alphabet alphabet,
                            int window, int horizon);
ShiftWindowSystem golden_mean_sft(int window, int horizon);

// q points on a circle of circumference 1 with arc metric; dynamics rotates
// by p/q (an isometry).
FiniteMetricSystem build_rotation(int p, int q);

// Truncated product distance between two words on the same window; spec'd
// separately from ShiftWindowSystem::rho for direct use.
double product_distance(const Alphabet& alphabet, const Word& x, const Word& y, int window);

// Covering-count bracket provider for windowed shifts: packing lower,
// cylinder upper, falling back to enumerated counts for tiny systems.
class ShiftCountingOracle : public CoveringCounter {
 public:
  explicit ShiftCountingOracle(const ShiftWindowSystem& sys, bool allow_enumeration = true,
                               long long enum_budget = 2048)
      : sys_(&sys), allow_enumeration_(allow_enumeration), enum_budget_(enum_budget) {}
  CountResult count(int n, double eps) const override;
  std::string describe() const override { return "shift_oracle:" + sys_->label; }

 private:
  const ShiftWindowSystem* sys_;
  bool allow_enumeration_;
  long long enum_budget_;
};

// Sandwich report for the coordinate-0 cylinder cover of a windowed shift,
// using certified directional bounds instead of full enumeration (the cover
// join of a partition cover is counted exactly).
SandwichReport shift_sandwich_check(const ShiftWindowSystem& sys, int n_max);

}  // namespace mdimlab
