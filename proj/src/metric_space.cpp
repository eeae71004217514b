#include "mdimlab/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace mdimlab {

namespace {

constexpr double kTriangleSlack = 1e-9;

using Mask = uint64_t;  // exact covering works on <= 64 points

int popcount(Mask m) { return __builtin_popcountll(m); }

}  // namespace

FiniteMetricSystem FiniteMetricSystem::create(std::vector<double> dist, std::vector<int> dynamics,
                                              std::string label) {
  FiniteMetricSystem sys;
  const size_t n2 = dist.size();
  int count = int(std::lround(std::sqrt(double(n2))));
  if (size_t(count) * count != n2 || count <= 0)
    throw std::invalid_argument("FiniteMetricSystem: dist is not a square table");
  if (count > kMaxTablePoints)
    throw resource_error("FiniteMetricSystem: " + std::to_string(count) +
                         " points exceeds the table budget");
  if (dynamics.size() != size_t(count))
    throw std::invalid_argument("FiniteMetricSystem: dynamics size mismatch");

  sys.count = count;
  sys.dist = std::move(dist);
  sys.dynamics = std::move(dynamics);
  sys.label = std::move(label);

  std::vector<int> seen(count, 0);
  for (int i = 0; i < count; ++i) {
    int t = sys.dynamics[i];
    if (t < 0 || t >= count) throw std::invalid_argument("dynamics: index out of range");
    seen[t]++;
  }
  for (int i = 0; i < count; ++i)
    if (seen[i] != 1) throw std::invalid_argument("dynamics: not a bijection");

  for (int i = 0; i < count; ++i) {
    if (sys.d(i, i) != 0) throw std::invalid_argument("dist: nonzero diagonal");
    for (int j = 0; j < i; ++j) {
      double dij = sys.d(i, j);
      if (dij < 0) throw std::invalid_argument("dist: negative entry");
      if (std::fabs(dij - sys.d(j, i)) > 1e-15)
        throw std::invalid_argument("dist: not symmetric");
      sys.diam = std::max(sys.diam, dij);
    }
  }

  auto check_triple = [&](int i, int j, int k) {
    if (sys.d(i, k) > sys.d(i, j) + sys.d(j, k) + kTriangleSlack)
      throw std::invalid_argument("dist: triangle inequality violated");
  };
  if (count <= 200) {
    for (int i = 0; i < count; ++i)
      for (int j = 0; j < count; ++j)
        for (int k = 0; k < count; ++k) check_triple(i, j, k);
  } else {
    CounterRng rng{uint64_t(count) * 2654435761ULL, 7};
    for (uint64_t s = 0; s < 2000000; ++s) {
      int i = int(rng.uniform(3 * s) * count);
      int j = int(rng.uniform(3 * s + 1) * count);
      int k = int(rng.uniform(3 * s + 2) * count);
      check_triple(i, j, k);
    }
  }
  return sys;
}

bool FiniteMetricSystem::identity_dynamics() const {
  for (int i = 0; i < count; ++i)
    if (dynamics[i] != i) return false;
  return true;
}

bool FiniteMetricSystem::isometric_dynamics(double tol) const {
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j)
      if (std::fabs(d(dynamics[i], dynamics[j]) - d(i, j)) > tol) return false;
  return true;
}

double FiniteMetricSystem::min_positive_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < i; ++j)
      if (d(i, j) > 0) best = std::min(best, d(i, j));
  return best;
}

double bowen_distance(const FiniteMetricSystem& sys, int i, int j, int n) {
  if (n < 1) throw std::invalid_argument("bowen_distance: n must be >= 1");
  if (i < 0 || j < 0 || i >= sys.count || j >= sys.count)
    throw std::domain_error("bowen_distance: point index out of range");
  double best = 0;
  int a = i, b = j;
  for (int k = 0; k < n; ++k) {
    best = std::max(best, sys.d(a, b));
    a = sys.dynamics[a];
    b = sys.dynamics[b];
  }
  return best;
}

std::vector<double> bowen_matrix(const FiniteMetricSystem& sys, int n) {
  if (n < 1) throw std::invalid_argument("bowen_matrix: n must be >= 1");
  const int P = sys.count;
  std::vector<double> out(sys.dist);
  std::vector<int> orbit(P);
  for (int i = 0; i < P; ++i) orbit[i] = i;
  for (int k = 1; k < n; ++k) {
    for (int i = 0; i < P; ++i) orbit[i] = sys.dynamics[orbit[i]];
    for (int i = 0; i < P; ++i)
      for (int j = 0; j < i; ++j) {
        double v = std::max(out[size_t(i) * P + j], sys.d(orbit[i], orbit[j]));
        out[size_t(i) * P + j] = v;
        out[size_t(j) * P + i] = v;
      }
  }
  return out;
}

double cover_diameter(const FiniteMetricSystem& sys, const Cover& cover) {
  double best = 0;
  for (const auto& s : cover.sets) {
    if (s.empty()) throw std::invalid_argument("cover: empty set");
    for (size_t a = 0; a < s.size(); ++a)
      for (size_t b = 0; b < a; ++b) best = std::max(best, sys.d(s[a], s[b]));
  }
  return best;
}

namespace {

void validate_cover(const FiniteMetricSystem& sys, const Cover& cover) {
  std::vector<char> hit(sys.count, 0);
  for (const auto& s : cover.sets) {
    if (s.empty()) throw std::invalid_argument("cover: empty set");
    for (int p : s) {
      if (p < 0 || p >= sys.count) throw std::invalid_argument("cover: bad index");
      hit[p] = 1;
    }
  }
  for (int i = 0; i < sys.count; ++i)
    if (!hit[i]) throw std::invalid_argument("cover: union misses a point");
}

}  // namespace

double lebesgue_number(const FiniteMetricSystem& sys, const Cover& cover) {
  validate_cover(sys, cover);
  const int P = sys.count;
  std::set<double> cand;
  for (int i = 0; i < P; ++i)
    for (int j = 0; j <= i; ++j) {
      cand.insert(sys.d(i, j));
      cand.insert(sys.d(i, j) / 2.0);
    }
  std::vector<std::vector<char>> member(cover.sets.size(), std::vector<char>(P, 0));
  for (size_t s = 0; s < cover.sets.size(); ++s)
    for (int p : cover.sets[s]) member[s][p] = 1;

  auto ball_inside_some = [&](int x, double r) {
    for (size_t s = 0; s < cover.sets.size(); ++s) {
      bool ok = true;
      for (int y = 0; y < P && ok; ++y)
        if (sys.d(x, y) < r && !member[s][y]) ok = false;
      if (ok) return true;
    }
    return false;
  };

  double best = 0;
  for (auto it = cand.rbegin(); it != cand.rend(); ++it) {
    double r = *it;
    if (r <= best || r <= 0) break;
    bool all = true;
    for (int x = 0; x < P && all; ++x) all = ball_inside_some(x, r);
    if (all) {
      best = r;
      break;
    }
  }
  return best;
}

Cover lebesgue_cover(const FiniteMetricSystem& sys, double eps) {
  if (eps <= 0) throw std::domain_error("lebesgue_cover: eps must be positive");
  const int P = sys.count;
  // Greedy eps/4-net: every point within < eps/4 of a center.
  std::vector<int> centers;
  for (int i = 0; i < P; ++i) {
    bool covered = false;
    for (int c : centers)
      if (sys.d(c, i) < eps / 4) {
        covered = true;
        break;
      }
    if (!covered) centers.push_back(i);
  }
  Cover cover;
  for (int c : centers) {
    std::vector<int> ball;
    for (int i = 0; i < P; ++i)
      if (sys.d(c, i) < eps / 2) ball.push_back(i);
    cover.sets.push_back(std::move(ball));
  }
  return cover;
}

namespace {

// --- exact covering machinery (<= 64 points) ---

std::vector<Mask> threshold_adjacency(int P, const DistFn& d, double eps) {
  std::vector<Mask> adj(P, 0);
  for (int i = 0; i < P; ++i) {
    adj[i] |= Mask(1) << i;
    for (int j = 0; j < i; ++j)
      if (d(i, j) <= eps) {
        adj[i] |= Mask(1) << j;
        adj[j] |= Mask(1) << i;
      }
  }
  return adj;
}

// Maximal cliques via Bron-Kerbosch with pivoting. Returns false if the cap
// is exceeded.
bool bron_kerbosch(const std::vector<Mask>& adj, Mask R, Mask Pm, Mask X,
                   std::vector<Mask>& out, size_t cap) {
  if (Pm == 0 && X == 0) {
    out.push_back(R);
    return out.size() <= cap;
  }
  Mask PX = Pm | X;
  int pivot = -1, best = -1;
  for (Mask m = PX; m;) {
    int u = __builtin_ctzll(m);
    m &= m - 1;
    int deg = popcount(adj[u] & Pm);
    if (deg > best) {
      best = deg;
      pivot = u;
    }
  }
  Mask candidates = Pm & ~adj[pivot];
  for (Mask m = candidates; m;) {
    int v = __builtin_ctzll(m);
    m &= m - 1;
    Mask vb = Mask(1) << v;
    if (!bron_kerbosch(adj, R | vb, Pm & adj[v], X & adj[v], out, cap)) return false;
    Pm &= ~vb;
    X |= vb;
  }
  return true;
}

struct SetCoverInstance {
  int universe = 0;
  std::vector<Mask> sets;
};

long long greedy_set_cover(const SetCoverInstance& inst) {
  Mask all = inst.universe == 64 ? ~Mask(0) : (Mask(1) << inst.universe) - 1;
  Mask covered = 0;
  long long used = 0;
  while (covered != all) {
    int best = -1, gain = 0;
    for (size_t s = 0; s < inst.sets.size(); ++s) {
      int g = popcount(inst.sets[s] & ~covered);
      if (g > gain) {
        gain = g;
        best = int(s);
      }
    }
    if (best < 0) throw std::logic_error("set cover: uncoverable point");
    covered |= inst.sets[best];
    ++used;
  }
  return used;
}

void bnb_set_cover(const SetCoverInstance& inst, Mask covered, long long used,
                   long long& best) {
  Mask all = inst.universe == 64 ? ~Mask(0) : (Mask(1) << inst.universe) - 1;
  if (covered == all) {
    best = std::min(best, used);
    return;
  }
  int remaining = popcount(all & ~covered);
  int max_gain = 0;
  for (const Mask& s : inst.sets) max_gain = std::max(max_gain, popcount(s & ~covered));
  if (max_gain == 0) return;
  long long bound = used + (remaining + max_gain - 1) / max_gain;
  if (bound >= best) return;

  // Branch on the uncovered point with the fewest candidate sets.
  int pick = -1, pick_count = INT32_MAX;
  for (int p = 0; p < inst.universe; ++p) {
    if (covered & (Mask(1) << p)) continue;
    int c = 0;
    for (const Mask& s : inst.sets)
      if (s & (Mask(1) << p)) ++c;
    if (c < pick_count) {
      pick_count = c;
      pick = p;
    }
  }
  std::vector<size_t> branches;
  for (size_t s = 0; s < inst.sets.size(); ++s)
    if (inst.sets[s] & (Mask(1) << pick)) branches.push_back(s);
  std::sort(branches.begin(), branches.end(), [&](size_t a, size_t b) {
    return popcount(inst.sets[a] & ~covered) > popcount(inst.sets[b] & ~covered);
  });
  for (size_t s : branches) bnb_set_cover(inst, covered | inst.sets[s], used + 1, best);
}

}  // namespace

std::vector<int> greedy_packing(int count, const DistFn& d, double eps) {
  std::vector<int> kept;
  for (int i = 0; i < count; ++i) {
    bool far = true;
    for (int k : kept)
      if (d(k, i) <= eps) {
        far = false;
        break;
      }
    if (far) kept.push_back(i);
  }
  return kept;
}

std::vector<int> greedy_net_centers(int count, const DistFn& d, double eps) {
  std::vector<char> covered(count, 0);
  std::vector<int> centers;
  for (int i = 0; i < count; ++i) {
    if (covered[i]) continue;
    centers.push_back(i);
    for (int j = 0; j < count; ++j)
      if (!covered[j] && d(i, j) <= eps / 2) covered[j] = 1;
  }
  return centers;
}

CountResult CountResult::from_counts(long long lo, long long hi, bool exact,
                                     std::string method) {
  CountResult r;
  r.lower = lo;
  r.upper = hi;
  r.log_lo = lo > 0 ? std::log(double(lo)) : 0.0;
  r.log_hi = hi > 0 ? std::log(double(hi)) : 0.0;
  r.exact = exact;
  r.method = std::move(method);
  return r;
}

CountResult CountResult::from_logs(double log_lo, double log_hi, bool exact,
                                   std::string method) {
  CountResult r;
  r.log_lo = log_lo;
  r.log_hi = log_hi;
  auto clamp = [](double lg) {
    if (lg > 42.0) return std::numeric_limits<long long>::max();  // e^42 > 2^60
    return (long long)std::llround(std::exp(lg));
  };
  r.lower = clamp(log_lo);
  r.upper = clamp(log_hi);
  r.exact = exact;
  r.method = std::move(method);
  return r;
}

CountResult covering_number(int count, const DistFn& d, double eps,
                            const CoveringOptions& opts) {
  if (eps <= 0) throw std::domain_error("covering_number: eps must be positive");
  if (count <= 0) return CountResult::from_counts(0, 0, true, "empty");
  if (count == 1) return CountResult::from_counts(1, 1, true, "singleton");

  long long lower = (long long)greedy_packing(count, d, eps).size();
  long long upper = (long long)greedy_net_centers(count, d, eps).size();

  if (count <= opts.exact_max_points && count <= 64) {
    auto adj = threshold_adjacency(count, d, eps);
    std::vector<Mask> cliques;
    Mask all = count == 64 ? ~Mask(0) : (Mask(1) << count) - 1;
    size_t cap = size_t(std::max(opts.exact_max_candidates, 0)) + 1;
    cap = std::min(cap, size_t(opts.clique_enum_cap));
    if (bron_kerbosch(adj, 0, all, 0, cliques, cap) &&
        cliques.size() <= size_t(opts.exact_max_candidates)) {
      SetCoverInstance inst{count, cliques};
      long long best = greedy_set_cover(inst);
      bnb_set_cover(inst, 0, 0, best);
      return CountResult::from_counts(best, best, true, "exact_set_cover");
    }
  }
  lower = std::max(1LL, lower);
  upper = std::max(lower, upper);
  bool tight = lower == upper;
  return CountResult::from_counts(lower, upper, tight,
                                  tight ? "greedy+packing(tight)" : "greedy+packing");
}

CountResult covering_number(const FiniteMetricSystem& sys, double eps,
                            const CoveringOptions& opts) {
  return covering_number(sys.count, [&](int i, int j) { return sys.d(i, j); }, eps, opts);
}

CountResult bowen_covering_number(const FiniteMetricSystem& sys, double eps, int n,
                                  const CoveringOptions& opts) {
  if (n < 1) throw std::invalid_argument("bowen_covering_number: n must be >= 1");
  auto m = bowen_matrix(sys, n);
  const int P = sys.count;
  return covering_number(P, [&, P](int i, int j) { return m[size_t(i) * P + j]; }, eps, opts);
}

JoinCount cover_join_count(const FiniteMetricSystem& sys, const Cover& cover, int n,
                           const CoveringOptions& opts) {
  if (n < 1) throw std::invalid_argument("cover_join_count: n must be >= 1");
  validate_cover(sys, cover);
  const int P = sys.count;
  const int S = int(cover.sets.size());

  // memberships[t][i] = cover sets containing T^t i
  std::vector<std::vector<std::vector<int>>> memberships(n,
      std::vector<std::vector<int>>(P));
  {
    std::vector<std::vector<int>> base(P);
    for (int s = 0; s < S; ++s)
      for (int p : cover.sets[s]) base[p].push_back(s);
    std::vector<int> orbit(P);
    for (int i = 0; i < P; ++i) orbit[i] = i;
    for (int t = 0; t < n; ++t) {
      for (int i = 0; i < P; ++i) memberships[t][i] = base[orbit[i]];
      if (t + 1 < n)
        for (int i = 0; i < P; ++i) orbit[i] = sys.dynamics[orbit[i]];
    }
  }

  bool partition_cover = true;
  for (int t = 0; t < n && partition_cover; ++t)
    for (int i = 0; i < P; ++i)
      if (memberships[t][i].size() != 1) {
        partition_cover = false;
        break;
      }

  if (partition_cover) {
    // Join cells are pairwise disjoint and nonempty, so the minimal subcover
    // is all of them.
    std::set<std::vector<int>> cells;
    std::vector<int> key(n);
    for (int i = 0; i < P; ++i) {
      for (int t = 0; t < n; ++t) key[t] = memberships[t][i][0];
      cells.insert(key);
    }
    return JoinCount{(long long)cells.size(), true, "disjoint_cells"};
  }

  // General case: enumerate nonempty join cells (tuples of member sets),
  // capped, then exact set cover when small enough.
  std::map<std::vector<int>, std::vector<int>> cells;  // tuple -> points
  size_t fanout_cap = 4096;
  bool fanout_exceeded = false;
  std::vector<int> tuple(n);
  for (int i = 0; i < P; ++i) {
    size_t combos = 1;
    for (int t = 0; t < n; ++t) combos *= memberships[t][i].size();
    if (combos > fanout_cap) {
      fanout_exceeded = true;
      for (int t = 0; t < n; ++t) tuple[t] = memberships[t][i][0];
      cells[tuple].push_back(i);
      continue;
    }
    std::vector<size_t> idx(n, 0);
    while (true) {
      for (int t = 0; t < n; ++t) tuple[t] = memberships[t][i][idx[t]];
      cells[tuple].push_back(i);
      int t = n - 1;
      while (t >= 0 && ++idx[t] == memberships[t][i].size()) idx[t--] = 0;
      if (t < 0) break;
    }
  }

  if (!fanout_exceeded && P <= 64 && cells.size() <= size_t(opts.clique_enum_cap)) {
    SetCoverInstance inst;
    inst.universe = P;
    for (auto& [key_, pts] : cells) {
      (void)key_;
      Mask m = 0;
      for (int p : pts) m |= Mask(1) << p;
      inst.sets.push_back(m);
    }
    long long best = greedy_set_cover(inst);
    if (inst.sets.size() <= size_t(std::max(opts.exact_max_candidates, 64)))
      bnb_set_cover(inst, 0, 0, best);
    bool exact = inst.sets.size() <= size_t(std::max(opts.exact_max_candidates, 64));
    return JoinCount{best, exact, exact ? "exact_set_cover" : "greedy_cells"};
  }

  // Greedy over the collected cells (a subcover, so an upper bound).
  std::vector<char> covered(P, 0);
  long long used = 0;
  int left = P;
  while (left > 0) {
    const std::vector<int>* best = nullptr;
    int gain = 0;
    for (auto& [key_, pts] : cells) {
      (void)key_;
      int g = 0;
      for (int p : pts)
        if (!covered[p]) ++g;
      if (g > gain) {
        gain = g;
        best = &pts;
      }
    }
    if (!best) throw std::logic_error("cover_join_count: join misses a point");
    for (int p : *best)
      if (!covered[p]) {
        covered[p] = 1;
        --left;
      }
    ++used;
  }
  return JoinCount{used, false, "greedy_cells"};
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::upper_bound: return "upper";
    case Provenance::lower_bound: return "lower";
    default: return "estimate";
  }
}

SandwichReport sandwich_check(const FiniteMetricSystem& sys, const Cover& cover, int n_max,
                              const CoveringOptions& opts) {
  SandwichReport rep;
  if (sys.count > opts.exact_max_points) {
    rep.skipped = true;
    rep.note = "skipped: exact mode unavailable";
    return rep;
  }
  rep.diam_u = cover_diameter(sys, cover);
  rep.leb_u = lebesgue_number(sys, cover);
  rep.all_hold = true;
  for (int n = 1; n <= n_max; ++n) {
    SandwichRow row;
    row.n = n;
    double eps_d = std::max(rep.diam_u, 1e-300);
    row.cover_at_diam = bowen_covering_number(sys, eps_d, n, opts);
    row.join = cover_join_count(sys, cover, n, opts);
    row.cover_at_leb = bowen_covering_number(sys, rep.leb_u, n, opts);
    row.left_certified = row.cover_at_diam.upper <= row.join.value;
    row.right_certified = row.join.value <= row.cover_at_leb.lower;
    if (!(row.left_certified && row.right_certified)) rep.all_hold = false;
    rep.rows.push_back(row);
  }
  rep.note = "exact";
  return rep;
}

CountResult EnumeratedCounter::count(int n, double eps) const {
  return bowen_covering_number(*sys_, eps, n, opts_);
}

double GrowthSeries::bracket_width() const {
  double lo = std::fabs(rate_lower);
  double w = std::fabs(rate_upper - rate_lower);
  if (lo < 1e-12) return w < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
  return w / lo;
}

GrowthSeries growth_rate(const CoveringCounter& counter, double eps, int n_lo, int n_hi) {
  if (eps <= 0) throw std::domain_error("growth_rate: eps must be positive");
  if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("growth_rate: bad n range");
  GrowthSeries g;
  g.eps = eps;
  g.exact = true;
  for (int n = n_lo; n <= n_hi; ++n) {
    CountResult c = counter.count(n, eps);
    g.ns.push_back(n);
    g.log_lower.push_back(c.log_lower());
    g.log_upper.push_back(c.log_upper());
    g.exact = g.exact && c.exact;
    if (g.method.empty()) g.method = c.method;
    else if (g.method != c.method) g.method = "mixed:" + g.method + "|" + c.method;
  }
  // True log-counts are nondecreasing in n; monotonizing keeps both bound
  // directions valid.
  for (size_t i = 1; i < g.log_lower.size(); ++i) {
    g.log_lower[i] = std::max(g.log_lower[i], g.log_lower[i - 1]);
    g.log_upper[i] = std::max(g.log_upper[i], g.log_upper[i - 1]);
  }

  auto slope_top_half = [&](const std::vector<double>& ys) {
    size_t n = g.ns.size();
    size_t start = n / 2;
    if (n - start < 2) start = n >= 2 ? n - 2 : 0;
    std::vector<double> xs;
    std::vector<double> ss;
    for (size_t i = start; i < n; ++i) {
      xs.push_back(double(g.ns[i]));
      ss.push_back(ys[i]);
    }
    if (xs.size() < 2) return 0.0;
    return least_squares(xs, ss).slope;
  };
  g.rate_lower = slope_top_half(g.log_lower);
  g.rate_upper = slope_top_half(g.log_upper);
  g.rate = 0.5 * (g.rate_lower + g.rate_upper);

  auto fekete = [&](const std::vector<double>& ys) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < g.ns.size(); ++i) best = std::min(best, ys[i] / double(g.ns[i]));
    return best;
  };
  g.fekete_lower = fekete(g.log_lower);
  g.fekete_upper = fekete(g.log_upper);
  size_t n = g.ns.size();
  g.last_ratio = n >= 2 ? g.log_upper[n - 1] - g.log_upper[n - 2] : g.log_upper[n - 1];
  return g;
}

GrowthSeries growth_rate(const FiniteMetricSystem& sys, double eps, int n_lo, int n_hi,
                         const CoveringOptions& opts) {
  EnumeratedCounter counter(sys, opts);
  return growth_rate(counter, eps, n_lo, n_hi);
}

TameReport tame_growth_table(const std::vector<std::pair<double, CountResult>>& counts,
                             const std::vector<double>& deltas) {
  TameReport rep;
  for (double delta : deltas) {
    std::vector<double> vals;
    for (const auto& [eps, c] : counts) {
      TameRow row;
      row.eps = eps;
      row.delta = delta;
      row.value = std::pow(eps, delta) * c.log_upper();
      rep.rows.push_back(row);
      vals.push_back(row.value);
    }
    TameVerdict v;
    v.delta = delta;
    if (delta == 0.0) {
      v.trending_to_zero = false;
      v.note = "fails at delta=0 (value equals log covering count)";
    } else {
      size_t n = vals.size();
      size_t half = n / 2;
      bool nonincreasing = true;
      for (size_t i = half + 1; i < n; ++i)
        if (vals[i] > vals[i - 1] + 1e-12) nonincreasing = false;
      double mx = *std::max_element(vals.begin(), vals.end());
      v.trending_to_zero = nonincreasing && (vals.back() <= 0.5 * mx + 1e-12);
      v.note = v.trending_to_zero ? "decreasing toward 0" : "no clear decay";
    }
    rep.verdicts.push_back(v);
  }
  return rep;
}

}  // namespace mdimlab
