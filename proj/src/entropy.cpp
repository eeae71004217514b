#include "mdimlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace mdimlab {

namespace {

double partition_diameter(const Alphabet& a, const std::vector<int>& cells) {
  double diam = 0;
  const int m = a.size();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j)
      if (cells[i] == cells[j]) diam = std::max(diam, a.d(i, j));
  return diam;
}

std::vector<int> normalize_cells(std::vector<int> cells) {
  std::map<int, int> remap;
  for (int& c : cells) {
    auto [it, inserted] = remap.insert({c, int(remap.size())});
    c = it->second;
  }
  return cells;
}

}  // namespace

bool Partition::refines(const Partition& other) const {
  if (cells.size() != other.cells.size()) return false;
  std::map<int, int> image;
  for (size_t s = 0; s < cells.size(); ++s) {
    auto [it, inserted] = image.insert({cells[s], other.cells[s]});
    if (!inserted && it->second != other.cells[s]) return false;
  }
  return true;
}

bool Partition::separates_all(const Alphabet& a) const {
  return cell_count == a.size();
}

Partition make_partition(const Alphabet& a, std::vector<int> cells, std::string label) {
  if (int(cells.size()) != a.size())
    throw std::invalid_argument("make_partition: cell vector size mismatch");
  Partition p;
  p.cells = normalize_cells(std::move(cells));
  p.cell_count = p.cells.empty() ? 0 : *std::max_element(p.cells.begin(), p.cells.end()) + 1;
  p.diameter = partition_diameter(a, p.cells);
  p.label = std::move(label);
  return p;
}

Partition point_partition(const Alphabet& a) {
  std::vector<int> cells(a.size());
  for (int i = 0; i < a.size(); ++i) cells[i] = i;
  return make_partition(a, std::move(cells), "points");
}

Partition single_cell_partition(const Alphabet& a) {
  return make_partition(a, std::vector<int>(a.size(), 0), "single_cell");
}

Partition grid_partition(const Alphabet& a, int m, int offset_num, int offset_den) {
  if (m < 1) throw std::invalid_argument("grid_partition: m must be >= 1");
  if (offset_den < 1) throw std::invalid_argument("grid_partition: bad offset");
  double off = double(offset_num) / (double(offset_den) * double(m));
  std::vector<int> cells(a.size());
  for (int i = 0; i < a.size(); ++i) {
    double s = a.symbols[i] - off;
    int c = int(std::floor(s * m));
    c = std::clamp(c, 0, m - 1);  // s = 1 lands in the top cell
    cells[i] = c;
  }
  std::string label = "grid_m" + std::to_string(m);
  if (offset_num != 0) label += "_off" + std::to_string(offset_num);
  return make_partition(a, std::move(cells), label);
}

double partition_entropy(std::span<const double> masses) {
  double total = 0;
  for (double p : masses) total += p;
  if (std::fabs(total - 1.0) > 1e-9)
    throw std::invalid_argument("partition_entropy: masses must sum to 1");
  return shannon_entropy(masses);
}

std::vector<double> cell_masses(const MeasureSpec& mu, const Partition& p) {
  std::vector<double> masses(p.cell_count, 0.0);
  for (int s = 0; s < mu.alphabet.size(); ++s) masses[p.cells[s]] += mu.symbol_prob(s);
  return masses;
}

namespace {

// H of the n-block law coarse-grained by per-coordinate cells, from the exact
// block distribution.
double block_entropy_generic(const MeasureSpec& mu, const Partition& p, int n,
                             long long budget) {
  BlockDistribution bd = block_distribution(mu, n, budget);
  if (p.separates_all(mu.alphabet)) {
    return shannon_entropy(bd.probs);
  }
  std::unordered_map<uint64_t, double> acc;
  acc.reserve(bd.words.size());
  const int m = bd.alphabet_size;
  for (size_t i = 0; i < bd.words.size(); ++i) {
    uint64_t w = bd.words[i];
    uint64_t key = 0, place = 1;
    for (int k = 0; k < n; ++k) {
      key += place * uint64_t(p.cells[w % m]);
      place *= uint64_t(p.cell_count);
      w /= m;
    }
    acc[key] += bd.probs[i];
  }
  std::vector<double> masses;
  masses.reserve(acc.size());
  for (auto& [k, v] : acc) masses.push_back(v);
  std::sort(masses.begin(), masses.end());
  return shannon_entropy(masses);
}

// Quantized Markov block entropy via dynamic programming over
// (cell word, end state); exact, with a budget on live cell words.
double block_entropy_markov_dp(const MeasureSpec& mu, const Partition& p, int n,
                               long long budget) {
  const int S = mu.alphabet.size();
  std::map<std::vector<uint8_t>, std::vector<double>> cur;
  for (int s = 0; s < S; ++s) {
    if (mu.stationary[s] <= 0) continue;
    std::vector<uint8_t> key{uint8_t(p.cells[s])};
    auto& v = cur.emplace(key, std::vector<double>(S, 0.0)).first->second;
    v[s] += mu.stationary[s];
  }
  for (int k = 1; k < n; ++k) {
    std::map<std::vector<uint8_t>, std::vector<double>> next;
    for (auto& [key, vec] : cur) {
      for (int s = 0; s < S; ++s) {
        if (vec[s] <= 0) continue;
        for (int t = 0; t < S; ++t) {
          double q = mu.transition[s][t];
          if (q <= 0) continue;
          auto nk = key;
          nk.push_back(uint8_t(p.cells[t]));
          auto& nv = next.emplace(nk, std::vector<double>(S, 0.0)).first->second;
          nv[t] += vec[s] * q;
        }
      }
      if ((long long)next.size() > budget)
        throw resource_error("markov quantized block over budget");
    }
    cur = std::move(next);
  }
  std::vector<double> masses;
  masses.reserve(cur.size());
  for (auto& [key, vec] : cur) {
    double tot = 0;
    for (double v : vec) tot += v;
    masses.push_back(tot);
  }
  return shannon_entropy(masses);
}

double block_entropy(const MeasureSpec& mu, const Partition& p, int n, long long budget) {
  // Generic exact path when the block law fits the budget.
  double log_support = double(n) * std::log(double(mu.alphabet.size()));
  if (log_support <= std::log(double(budget))) {
    try {
      return block_entropy_generic(mu, p, n, budget);
    } catch (const resource_error&) {
      // fall through to structured paths
    }
  }
  if (mu.kind == MeasureKind::bernoulli) {
    // Independent coordinates: the quantized block is i.i.d. cells.
    std::vector<double> masses = cell_masses(mu, p);
    return double(n) * shannon_entropy(masses);
  }
  if (mu.kind == MeasureKind::markov) {
    if (p.separates_all(mu.alphabet)) {
      // Chain rule: H_n = H(pi) + (n-1) sum_i pi_i H(P_i.)
      double h1 = shannon_entropy(mu.stationary);
      double hc = 0;
      for (int i = 0; i < mu.alphabet.size(); ++i)
        if (mu.stationary[i] > 0)
          hc += mu.stationary[i] * shannon_entropy(mu.transition[i]);
      return h1 + double(n - 1) * hc;
    }
    return block_entropy_markov_dp(mu, p, n, budget);
  }
  throw resource_error("dynamical_entropy: block budget exceeded for n=" + std::to_string(n));
}

std::optional<double> closed_form_rate(const MeasureSpec& mu, const Partition& p) {
  if (!p.separates_all(mu.alphabet)) return std::nullopt;
  if (mu.kind == MeasureKind::bernoulli) return shannon_entropy(mu.probs);
  if (mu.kind == MeasureKind::markov) {
    double hc = 0;
    for (int i = 0; i < mu.alphabet.size(); ++i)
      if (mu.stationary[i] > 0) hc += mu.stationary[i] * shannon_entropy(mu.transition[i]);
    return hc;
  }
  return std::nullopt;
}

}  // namespace

EntropyEstimate dynamical_entropy(const MeasureSpec& mu, const Partition& p, int n_max,
                                  long long budget) {
  if (n_max < 1) throw std::invalid_argument("dynamical_entropy: n_max must be >= 1");
  if (int(p.cells.size()) != mu.alphabet.size())
    throw std::invalid_argument("dynamical_entropy: partition does not match alphabet");
  if (mu.kind == MeasureKind::empirical && !mu.approximate_ok)
    throw std::invalid_argument(
        "dynamical_entropy: empirical measure is not invariant; set approximate_ok");

  EntropyEstimate est;
  double prev = 0;
  for (int n = 1; n <= n_max; ++n) {
    double hn = block_entropy(mu, p, n, budget);
    est.block_entropies.push_back({n, hn});
    if (n == n_max) {
      est.ratio_estimate = hn / double(n);
      est.conditional_estimate = hn - prev;  // H_1 - H_0 = H_1 at n_max = 1
    }
    prev = hn;
  }
  est.closed_form = closed_form_rate(mu, p);
  est.chosen = est.conditional_estimate;
  est.method = "conditional_at_n_max";
  return est;
}

InfEntropyResult inf_entropy_small_partitions(const MeasureSpec& mu, double eps,
                                              const PartitionFamilyOptions& opts, int n_max) {
  if (eps <= 0) throw std::domain_error("inf_entropy_small_partitions: eps must be positive");
  const Alphabet& a = mu.alphabet;

  // eps-independent candidate pool so the admissible families nest in eps.
  std::vector<Partition> pool;
  pool.push_back(point_partition(a));
  pool.push_back(single_cell_partition(a));
  int grid_cap = std::max(2, std::min(opts.max_grid, 4 * a.size()));
  for (int m = 2; m <= grid_cap; ++m) {
    for (int off = 0; off < std::max(1, opts.offsets); ++off)
      pool.push_back(grid_partition(a, m, off, std::max(1, opts.offsets)));
  }
  if (opts.include_nets && a.size() > 1) {
    // Voronoi cells of greedy nets at a fixed ladder of radii.
    std::set<double> radii;
    for (int i = 0; i < a.size(); ++i)
      for (int j = 0; j < i; ++j) {
        radii.insert(a.d(i, j));
        radii.insert(a.d(i, j) / 2);
      }
    int step = std::max<int>(1, int(radii.size()) / 24);
    int idx = 0;
    for (double r : radii) {
      if (idx++ % step != 0) continue;
      std::vector<int> centers;
      for (int i = 0; i < a.size(); ++i) {
        bool covered = false;
        for (int c : centers)
          if (a.d(c, i) < r) covered = true;
        if (!covered) centers.push_back(i);
      }
      std::vector<int> cells(a.size());
      for (int i = 0; i < a.size(); ++i) {
        int best = centers[0];
        for (int c : centers)
          if (a.d(c, i) < a.d(best, i)) best = c;
        cells[i] = best;
      }
      pool.push_back(make_partition(a, std::move(cells), "net_r" + format_double(r)));
    }
  }
  if (opts.include_merges && a.size() > 1) {
    // Greedy left-to-right merges of adjacent symbols under a width cap.
    std::set<double> widths;
    for (int i = 0; i < a.size(); ++i)
      for (int j = 0; j < i; ++j) widths.insert(a.d(i, j));
    int step = std::max<int>(1, int(widths.size()) / 16);
    int idx = 0;
    for (double wcap : widths) {
      if (idx++ % step != 0) continue;
      std::vector<int> cells(a.size());
      int cell = 0;
      double start = a.symbols[0];
      for (int i = 0; i < a.size(); ++i) {
        if (a.symbols[i] - start > wcap) {
          ++cell;
          start = a.symbols[i];
        }
        cells[i] = cell;
      }
      pool.push_back(make_partition(a, std::move(cells), "merge_w" + format_double(wcap)));
    }
  }

  // Deduplicate by cell structure.
  std::map<std::vector<int>, Partition> unique;
  for (auto& p : pool) unique.insert({p.cells, p});

  InfEntropyResult res;
  bool first = true;
  bool all_point = true;
  const Partition point = point_partition(a);
  for (auto& [cells, p] : unique) {
    bool admissible = opts.strict ? (p.diameter < eps) : (p.diameter <= eps);
    if (!admissible) continue;
    ++res.admissible_candidates;
    if (cells != point.cells) all_point = false;
    double value = dynamical_entropy(mu, p, n_max).chosen;
    if (first || value < res.value) {
      res.value = value;
      res.argmin = p;
      first = false;
    }
  }
  if (first)
    throw std::logic_error("inf_entropy_small_partitions: no admissible partition (unreachable)");
  res.certified_minimal = all_point;
  return res;
}

DimensionEstimate make_dimension_estimate(std::vector<double> eps_grid,
                                          std::vector<double> raw_values, std::string label) {
  if (eps_grid.size() != raw_values.size() || eps_grid.empty())
    throw std::invalid_argument("make_dimension_estimate: grid/value mismatch");
  DimensionEstimate d;
  d.eps_grid = std::move(eps_grid);
  d.raw_values = std::move(raw_values);
  d.label = std::move(label);
  std::vector<double> xs;
  for (size_t i = 0; i < d.eps_grid.size(); ++i) {
    if (i > 0 && d.eps_grid[i] >= d.eps_grid[i - 1])
      throw std::invalid_argument("make_dimension_estimate: eps grid must be decreasing");
    double x = std::log(1.0 / d.eps_grid[i]);
    xs.push_back(x);
    d.ratios.push_back(x > 0 ? d.raw_values[i] / x : 0.0);
  }
  if (xs.size() >= 2) {
    auto fit = least_squares(xs, d.raw_values);
    d.slope = fit.slope;
    d.residual = fit.max_residual;
  } else {
    d.slope = d.ratios.front();
  }
  double sum = 0;
  for (double r : d.ratios) sum += r;
  d.mean_ratio = sum / double(d.ratios.size());
  d.last_ratio = d.ratios.back();
  return d;
}

DimensionEstimate mrid_estimate(const MeasureSpec& mu, std::vector<double> eps_grid,
                                const PartitionFamilyOptions& opts, int n_max) {
  if (eps_grid.size() < 3)
    throw std::invalid_argument("mrid_estimate: need at least 3 grid points");
  std::vector<double> values;
  for (double eps : eps_grid)
    values.push_back(inf_entropy_small_partitions(mu, eps, opts, n_max).value);
  auto d = make_dimension_estimate(std::move(eps_grid), std::move(values), "MRID");
  // Family nesting makes the raw infimum value nonincreasing in eps.
  for (size_t i = 1; i < d.raw_values.size(); ++i)
    if (d.raw_values[i] + 1e-12 < d.raw_values[i - 1])
      d.flags.push_back("monotonicity violation at eps=" + format_double(d.eps_grid[i]));
  return d;
}

InfoDimRate info_dim_rate(const MeasureSpec& mu, std::vector<int> m_grid, int n_max) {
  InfoDimRate out;
  for (int m : m_grid) {
    if (m < 2) continue;  // log 1 = 0 excluded
    Partition pm = grid_partition(mu.alphabet, m);
    double h = dynamical_entropy(mu, pm, n_max).chosen;
    out.m_grid.push_back(m);
    out.rates.push_back(h);
    out.ratios.push_back(h / std::log(double(m)));
  }
  if (out.ratios.empty()) throw std::invalid_argument("info_dim_rate: empty m grid");
  size_t half = out.ratios.size() / 2;
  out.d_upper = *std::max_element(out.ratios.begin() + half, out.ratios.end());
  out.d_lower = *std::min_element(out.ratios.begin() + half, out.ratios.end());
  return out;
}

}  // namespace mdimlab
