// Independent brute-force oracles used only by tests. These deliberately
// avoid the library's algorithms: set cover by subset DP, rate-distortion by
// grid search over conditional distributions, block laws by word enumeration.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "mdimlab/measures.hpp"
#include "mdimlab/rate_distortion.hpp"

namespace oracles {

// Exact minimal number of diameter-<=eps sets covering {0..count-1}; subset
// DP over masks, O(3^count). Independent of the clique/set-cover pipeline.
inline int cover_dp(int count, const std::function<double(int, int)>& d, double eps) {
  if (count <= 0) return 0;
  if (count > 20) throw std::invalid_argument("cover_dp: too many points");
  const uint32_t full = (count == 32) ? ~0u : ((1u << count) - 1);
  // valid[mask] = the set has diameter <= eps
  std::vector<char> valid(full + 1, 0);
  std::vector<double> diam(full + 1, 0.0);
  valid[0] = 1;
  for (uint32_t mask = 1; mask <= full; ++mask) {
    uint32_t low = mask & (~mask + 1);
    uint32_t rest = mask ^ low;
    int i = __builtin_ctz(low);
    double dm = diam[rest];
    for (uint32_t m = rest; m; m &= m - 1) {
      int j = __builtin_ctz(m);
      dm = std::max(dm, d(i, j));
    }
    diam[mask] = dm;
    valid[mask] = dm <= eps;
  }
  std::vector<int> best(full + 1, INT32_MAX);
  best[0] = 0;
  for (uint32_t mask = 1; mask <= full; ++mask) {
    uint32_t low = mask & (~mask + 1);
    // Iterate over submasks of mask that contain the lowest set bit.
    for (uint32_t sub = mask; sub; sub = (sub - 1) & mask) {
      if (!(sub & low) || !valid[sub]) continue;
      uint32_t rest = mask ^ sub;
      if (best[rest] != INT32_MAX) best[mask] = std::min(best[mask], best[rest] + 1);
    }
  }
  return best[full];
}

// All probability vectors with k entries on the grid {0, 1/steps, ..., 1}.
inline std::vector<std::vector<double>> simplex_grid(int k, int steps) {
  std::vector<std::vector<double>> out;
  std::vector<int> counts(k, 0);
  std::function<void(int, int)> rec = [&](int idx, int remaining) {
    if (idx == k - 1) {
      counts[idx] = remaining;
      std::vector<double> v(k);
      for (int i = 0; i < k; ++i) v[i] = double(counts[i]) / double(steps);
      out.push_back(v);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[idx] = c;
      rec(idx + 1, remaining - c);
    }
  };
  rec(0, steps);
  return out;
}

// min I(X;Y) over conditional kernels W on the simplex grid subject to
// E[c(X,Y)] <= distortion_budget. Exhaustive over the product of per-row
// grids; independent of the alternating-minimization solver.
inline double rd_grid_min(const mdimlab::DistortionProblem& prob, double distortion_budget,
                          int steps) {
  const int nx = prob.n_source();
  const int ny = prob.n_repro();
  auto grid = simplex_grid(ny, steps);
  const size_t G = grid.size();
  // Precompute per grid row: mean cost per source row and sum W log W.
  std::vector<std::vector<double>> row_cost(nx, std::vector<double>(G, 0.0));
  std::vector<double> row_wlogw(G, 0.0);
  for (size_t g = 0; g < G; ++g) {
    double s = 0;
    for (int y = 0; y < ny; ++y) {
      double w = grid[g][y];
      if (w > 0) s += w * std::log(w);
    }
    row_wlogw[g] = s;
    for (int x = 0; x < nx; ++x) {
      double cv = 0;
      for (int y = 0; y < ny; ++y) cv += grid[g][y] * prob.c(x, y);
      row_cost[x][g] = cv;
    }
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<size_t> pick(nx, 0);
  std::vector<double> q(ny);
  std::function<void(int, double)> rec = [&](int x, double cost_acc) {
    if (cost_acc > distortion_budget + 1e-12) {
      // Rows are processed in order; remaining rows can only add cost >= 0
      // times probabilities, but a partial sum may still be recoverable only
      // if later rows have zero-cost options. Prune conservatively: only if
      // even all-zero later cost cannot help.
      // (cost_acc only grows, so this prune is safe.)
      return;
    }
    if (x == nx) {
      std::fill(q.begin(), q.end(), 0.0);
      for (int i = 0; i < nx; ++i)
        for (int y = 0; y < ny; ++y) q[y] += prob.source_probs[i] * grid[pick[i]][y];
      double mi = 0;
      for (int i = 0; i < nx; ++i) mi += prob.source_probs[i] * row_wlogw[pick[i]];
      for (int y = 0; y < ny; ++y)
        if (q[y] > 0) mi -= q[y] * std::log(q[y]);
      best = std::min(best, std::max(0.0, mi));
      return;
    }
    for (size_t g = 0; g < G; ++g) {
      pick[x] = g;
      rec(x + 1, cost_acc + prob.source_probs[x] * row_cost[x][g]);
    }
  };
  rec(0, 0.0);
  return best;
}

// Block law of a Markov measure by direct enumeration of all words (not the
// path-growing code in the library).
inline std::map<uint64_t, double> markov_blocks_by_enumeration(
    const mdimlab::MeasureSpec& mu, int n) {
  const int m = mu.alphabet.size();
  uint64_t total = 1;
  for (int k = 0; k < n; ++k) total *= m;
  std::map<uint64_t, double> out;
  for (uint64_t w = 0; w < total; ++w) {
    uint64_t x = w;
    std::vector<uint8_t> block(n);
    for (int k = 0; k < n; ++k) {
      block[k] = uint8_t(x % m);
      x /= m;
    }
    double p = mu.stationary[block[0]];
    for (int k = 1; k < n; ++k) p *= mu.transition[block[k - 1]][block[k]];
    if (p > 0) out[w] = p;
  }
  return out;
}

}  // namespace oracles
