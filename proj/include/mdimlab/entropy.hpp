#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdimlab/measures.hpp"

namespace mdimlab {

// Partition of the alphabet symbols; diameter is measured in the alphabet
// metric (the coordinate-0 projection scale used throughout).
struct Partition {
  std::vector<int> cells;  // symbol -> cell id, ids 0..cell_count-1
  int cell_count = 0;
  double diameter = 0.0;
  std::string label;

  bool refines(const Partition& other) const;
  bool separates_all(const Alphabet& a) const;  // every cell a singleton
};

Partition make_partition(const Alphabet& a, std::vector<int> cells, std::string label);
Partition point_partition(const Alphabet& a);
Partition single_cell_partition(const Alphabet& a);
// Cell of symbol s is floor(m*s) clipped to m-1 (s = 1 lands in cell m-1);
// offset shifts the bin edges by offset_num / (offset_den * m).
Partition grid_partition(const Alphabet& a, int m, int offset_num = 0, int offset_den = 1);

double partition_entropy(std::span<const double> masses);
// Cell masses of the one-coordinate marginal under the partition.
std::vector<double> cell_masses(const MeasureSpec& mu, const Partition& p);

struct EntropyEstimate {
  std::vector<std::pair<int, double>> block_entropies;  // (n, H_n)
  double ratio_estimate = 0.0;        // H_n / n at n_max
  double conditional_estimate = 0.0;  // H_n - H_{n-1} at n_max
  std::optional<double> closed_form;  // Bernoulli / Markov point-partition rate
  double chosen = 0.0;                // conditional estimate by default
  std::string method;
};

// H_n = H_mu(P v T^{-1}P v ... v T^{-(n-1)}P) for the coordinate partition
// induced by P, via exact block laws; product measures and symbol-separating
// Markov partitions take exact closed-form paths when enumeration would
// exceed the budget.
EntropyEstimate dynamical_entropy(const MeasureSpec& mu, const Partition& p, int n_max,
                                  long long budget = kDefaultBlockBudget);

struct PartitionFamilyOptions {
  int offsets = 4;            // K: grid offsets k/(K*m)
  bool include_nets = true;   // Voronoi partitions of greedy nets
  bool include_merges = true; // greedy merges of adjacent point cells
  int max_grid = 128;
  bool strict = false;        // require diameter < eps instead of <= eps
};

struct InfEntropyResult {
  double value = 0.0;  // an upper bound on the true infimum
  Partition argmin;
  bool certified_minimal = false;  // every admissible candidate is the point partition
  int admissible_candidates = 0;
};

// Minimum dynamical-entropy estimate over a declared, nested family of
// diameter-constrained alphabet partitions (grids with offsets, net Voronoi
// cells, merges). Documented upper bound on the infimum over all partitions.
InfEntropyResult inf_entropy_small_partitions(const MeasureSpec& mu, double eps,
                                              const PartitionFamilyOptions& opts, int n_max);

struct DimensionEstimate {
  std::vector<double> eps_grid;   // strictly decreasing scales (or 1/m grid)
  std::vector<double> raw_values; // per-scale unnormalized quantity
  std::vector<double> ratios;     // raw / log(1/eps)
  double slope = 0.0;             // LS slope of raw vs log(1/eps)
  double residual = 0.0;
  double mean_ratio = 0.0;
  double last_ratio = 0.0;
  std::string label;
  std::vector<std::string> flags;
};

DimensionEstimate make_dimension_estimate(std::vector<double> eps_grid,
                                          std::vector<double> raw_values, std::string label);

// Growth of the family infimum relative to log(1/eps).
DimensionEstimate mrid_estimate(const MeasureSpec& mu, std::vector<double> eps_grid,
                                const PartitionFamilyOptions& opts, int n_max);

struct InfoDimRate {
  std::vector<int> m_grid;
  std::vector<double> rates;   // h_mu(P_m) in nats
  std::vector<double> ratios;  // h_mu(P_m) / log m
  double d_upper = 0.0;        // max ratio over the top half of the grid
  double d_lower = 0.0;        // min ratio over the top half
};

// h_mu(P_m)/log m table over the 1/m grid partitions (m = 1 excluded).
InfoDimRate info_dim_rate(const MeasureSpec& mu, std::vector<int> m_grid, int n_max);

}  // namespace mdimlab
