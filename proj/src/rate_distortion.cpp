#include "mdimlab/rate_distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdimlab {

double DistortionProblem::min_constant_distortion() const {
  double best = std::numeric_limits<double>::infinity();
  for (int y = 0; y < n_repro(); ++y) {
    double v = 0;
    for (int x = 0; x < n_source(); ++x) v += source_probs[x] * c(x, y);
    best = std::min(best, v);
  }
  return best;
}

double DistortionProblem::source_entropy() const { return shannon_entropy(source_probs); }

DistortionProblem DistortionProblem::from_measure(const MeasureSpec& mu, int n, double p,
                                                  Repro repro, long long budget) {
  if (n < 1) throw std::invalid_argument("DistortionProblem: n must be >= 1");
  if (p < 1) throw std::invalid_argument("DistortionProblem: p must be >= 1");
  BlockDistribution bd = block_distribution(mu, n, budget);
  DistortionProblem prob;
  prob.n = n;
  prob.p = p;
  prob.alphabet_diam = mu.alphabet.diam();
  for (size_t i = 0; i < bd.words.size(); ++i) {
    if (bd.probs[i] <= 0) continue;
    prob.source_words.push_back(bd.words[i]);
    prob.source_probs.push_back(bd.probs[i]);
  }
  if (repro == Repro::support) {
    prob.repro_words = prob.source_words;
    prob.repro_covers_support = true;
  } else {
    long long total = 1;
    const int m = mu.alphabet.size();
    for (int k = 0; k < n; ++k) {
      total *= m;
      if (total > budget)
        throw resource_error("DistortionProblem: full reproduction codebook over budget");
    }
    for (long long w = 0; w < total; ++w) prob.repro_words.push_back(uint64_t(w));
    prob.repro_covers_support = true;
  }
  const int m = mu.alphabet.size();
  prob.cost.resize(size_t(prob.n_source()) * prob.n_repro());
  for (int x = 0; x < prob.n_source(); ++x) {
    uint64_t wx = prob.source_words[x];
    std::vector<uint8_t> bx(n);
    for (int k = 0; k < n; ++k) {
      bx[k] = uint8_t(wx % m);
      wx /= m;
    }
    for (int y = 0; y < prob.n_repro(); ++y) {
      uint64_t wy = prob.repro_words[y];
      double s = 0;
      for (int k = 0; k < n; ++k) {
        int sy = int(wy % m);
        wy /= m;
        s += std::pow(mu.alphabet.d(bx[k], sy), p);
      }
      prob.cost[size_t(x) * prob.n_repro() + y] = s / double(n);
    }
  }
  return prob;
}

double mutual_information(const std::vector<double>& joint, int rows, int cols) {
  if (int(joint.size()) != rows * cols)
    throw std::invalid_argument("mutual_information: shape mismatch");
  double total = 0;
  for (double v : joint) {
    if (v < -1e-15) throw std::invalid_argument("mutual_information: negative entry");
    total += v;
  }
  if (std::fabs(total - 1.0) > 1e-9)
    throw std::invalid_argument("mutual_information: entries must sum to 1");
  std::vector<double> px(rows, 0.0), py(cols, 0.0);
  for (int x = 0; x < rows; ++x)
    for (int y = 0; y < cols; ++y) {
      px[x] += joint[size_t(x) * cols + y];
      py[y] += joint[size_t(x) * cols + y];
    }
  double mi = 0;
  for (int x = 0; x < rows; ++x)
    for (int y = 0; y < cols; ++y) {
      double j = joint[size_t(x) * cols + y];
      if (j > 0) mi += j * std::log(j / (px[x] * py[y]));
    }
  return std::max(0.0, mi);
}

BAPoint blahut_arimoto(const DistortionProblem& prob, double beta, double tol, int max_iter) {
  if (beta < 0) throw std::invalid_argument("blahut_arimoto: beta must be >= 0");
  if (tol <= 0) throw std::invalid_argument("blahut_arimoto: tol must be positive");
  const int nx = prob.n_source();
  const int ny = prob.n_repro();
  std::vector<double> q(ny, 1.0 / double(ny));
  std::vector<double> w(size_t(nx) * ny, 0.0);
  std::vector<double> logq(ny);

  double f_prev = std::numeric_limits<double>::infinity();
  BAPoint out;
  out.beta = beta;
  for (int iter = 1; iter <= max_iter; ++iter) {
    for (int y = 0; y < ny; ++y) logq[y] = q[y] > 0 ? std::log(q[y]) : -1e300;
    // W(y|x) proportional to q(y) exp(-beta c(x,y)), log-shifted for stability.
    for (int x = 0; x < nx; ++x) {
      double best = -std::numeric_limits<double>::infinity();
      for (int y = 0; y < ny; ++y)
        best = std::max(best, logq[y] - beta * prob.c(x, y));
      double z = 0;
      for (int y = 0; y < ny; ++y) {
        double v = std::exp(logq[y] - beta * prob.c(x, y) - best);
        w[size_t(x) * ny + y] = v;
        z += v;
      }
      for (int y = 0; y < ny; ++y) w[size_t(x) * ny + y] /= z;
    }
    for (int y = 0; y < ny; ++y) {
      double v = 0;
      for (int x = 0; x < nx; ++x) v += prob.source_probs[x] * w[size_t(x) * ny + y];
      q[y] = v;
    }
    double rate = 0, dist = 0;
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y) {
        double jw = prob.source_probs[x] * w[size_t(x) * ny + y];
        if (jw > 0) {
          rate += jw * std::log(w[size_t(x) * ny + y] / q[y]);
          dist += jw * prob.c(x, y);
        }
      }
    rate = std::max(0.0, rate);
    double f = rate + beta * dist;
    if (f > f_prev + 1e-9 * std::max(1.0, std::fabs(f_prev)))
      throw std::logic_error("blahut_arimoto: Lagrangian increased");
    out.iters = iter;
    out.distortion = dist;
    out.rate = rate / double(prob.n);
    if (std::fabs(f_prev - f) < tol) {
      out.converged = true;
      return out;
    }
    f_prev = f;
  }
  out.converged = false;
  return out;
}

void RDCurve::insert_sorted(const BAPoint& pt) {
  auto it = std::lower_bound(points.begin(), points.end(), pt,
                             [](const BAPoint& a, const BAPoint& b) {
                               return a.distortion < b.distortion;
                             });
  // Drop near-duplicates, keeping the lower rate.
  if (it != points.end() && std::fabs(it->distortion - pt.distortion) < 1e-15) {
    if (pt.rate < it->rate) *it = pt;
    return;
  }
  points.insert(it, pt);
}

double RDCurve::worst_monotonicity_violation() const {
  double worst = 0;
  for (size_t i = 1; i < points.size(); ++i)
    worst = std::max(worst, points[i].rate - points[i - 1].rate);
  return worst;
}

double RDCurve::worst_convexity_violation() const {
  double worst = 0;
  for (size_t i = 1; i + 1 < points.size(); ++i) {
    double d0 = points[i - 1].distortion, d1 = points[i].distortion,
           d2 = points[i + 1].distortion;
    double r0 = points[i - 1].rate, r1 = points[i].rate, r2 = points[i + 1].rate;
    if (d2 - d0 < 1e-14) continue;
    // Chord value at d1 must not fall below r1 for a convex curve.
    double chord = r0 + (r2 - r0) * (d1 - d0) / (d2 - d0);
    worst = std::max(worst, r1 - chord);
  }
  return worst;
}

RDCurve sweep_rd_curve(const DistortionProblem& prob, const SweepOptions& opts) {
  RDCurve curve;
  curve.n = prob.n;
  curve.p = prob.p;
  // Exact beta -> 0 endpoint: constant reproduction, zero rate.
  BAPoint zero;
  zero.beta = 0.0;
  zero.rate = 0.0;
  zero.distortion = prob.min_constant_distortion();
  zero.iters = 0;
  zero.converged = true;
  curve.insert_sorted(zero);

  int k = std::max(2, opts.initial_points);
  for (int i = 0; i < k; ++i) {
    double t = double(i) / double(k - 1);
    double beta = opts.beta_lo * std::pow(opts.beta_hi / opts.beta_lo, t);
    curve.insert_sorted(blahut_arimoto(prob, beta));
  }
  // Refine where the distortion jumps the most.
  double gap_target = opts.refine_distortion_gap;
  if (gap_target <= 0) gap_target = std::max(1e-4, zero.distortion / 64.0);
  while (int(curve.points.size()) < opts.max_points) {
    size_t best = 0;
    double best_gap = 0;
    for (size_t i = 1; i < curve.points.size(); ++i) {
      double g = curve.points[i].distortion - curve.points[i - 1].distortion;
      if (g > best_gap) {
        best_gap = g;
        best = i;
      }
    }
    if (best_gap <= gap_target) break;
    const BAPoint& lo = curve.points[best - 1];
    const BAPoint& hi = curve.points[best];
    double beta = lo.beta <= 0 ? hi.beta * 2.0
                               : std::sqrt(lo.beta * hi.beta);
    if (lo.beta <= 0) beta = std::max(hi.beta / 2.0, 1e-9);
    BAPoint pt = blahut_arimoto(prob, beta);
    size_t before = curve.points.size();
    curve.insert_sorted(pt);
    if (curve.points.size() == before) break;  // duplicate; no progress
  }
  return curve;
}

namespace {

// Linear interpolation of rate at a distortion inside [below, above].
double interp_rate(const BAPoint& below, const BAPoint& above, double d) {
  if (above.distortion - below.distortion < 1e-15) return std::min(below.rate, above.rate);
  double t = (d - below.distortion) / (above.distortion - below.distortion);
  return below.rate + t * (above.rate - below.rate);
}

double interp_distortion(const BAPoint& below, const BAPoint& above, double r) {
  if (std::fabs(above.rate - below.rate) < 1e-15) return std::min(below.distortion, above.distortion);
  double t = (r - below.rate) / (above.rate - below.rate);
  return below.distortion + t * (above.distortion - below.distortion);
}

}  // namespace

CurveQuery rate_at_distortion(RDCurve& curve, const DistortionProblem& prob,
                              double distortion_target, double tol) {
  CurveQuery out;
  double d0 = prob.min_constant_distortion();
  if (distortion_target >= d0 - 1e-15) {
    out.value = 0.0;
    out.exact_zero = true;
    return out;
  }
  // Ensure the curve reaches below the target; widen the sweep once.
  auto lowest = [&]() { return curve.points.front().distortion; };
  if (lowest() > distortion_target) {
    double beta = 0;
    for (const auto& pt : curve.points) beta = std::max(beta, pt.beta);
    beta = std::max(beta, 1.0);
    for (int i = 0; i < 16 && lowest() > distortion_target; ++i) {
      beta *= 4;
      curve.insert_sorted(blahut_arimoto(prob, beta));
      if (beta > std::pow(2.0, 26)) break;
    }
    if (lowest() > distortion_target)
      throw std::runtime_error("rate_at_distortion: curve does not reach the target");
  }
  for (int round = 0; round < 80; ++round) {
    size_t hi_idx = 0;
    while (hi_idx < curve.points.size() &&
           curve.points[hi_idx].distortion < distortion_target)
      ++hi_idx;
    if (hi_idx == 0) {
      out.value = curve.points.front().rate;
      out.below = out.above = curve.points.front();
      return out;
    }
    if (hi_idx == curve.points.size()) hi_idx = curve.points.size() - 1;
    const BAPoint below = curve.points[hi_idx - 1];
    const BAPoint above = curve.points[hi_idx];
    if (below.rate - above.rate <= tol ||
        above.distortion - below.distortion <= 1e-13) {
      out.value = interp_rate(below, above, distortion_target);
      out.below = below;
      out.above = above;
      return out;
    }
    double beta = above.beta <= 0 ? std::max(below.beta / 2.0, 1e-9)
                                  : std::sqrt(std::max(below.beta, 1e-9) * above.beta);
    if (above.beta <= 0) beta = std::max(below.beta / 2.0, 1e-9);
    size_t before = curve.points.size();
    curve.insert_sorted(blahut_arimoto(prob, beta));
    if (curve.points.size() == before) {
      out.value = interp_rate(below, above, distortion_target);
      out.below = below;
      out.above = above;
      return out;
    }
  }
  size_t hi_idx = 1;
  while (hi_idx < curve.points.size() && curve.points[hi_idx].distortion < distortion_target)
    ++hi_idx;
  hi_idx = std::min(hi_idx, curve.points.size() - 1);
  out.below = curve.points[hi_idx - 1];
  out.above = curve.points[hi_idx];
  out.value = interp_rate(out.below, out.above, distortion_target);
  return out;
}

CurveQuery distortion_at_rate(RDCurve& curve, const DistortionProblem& prob,
                              double rate_target, double tol) {
  CurveQuery out;
  if (rate_target < 0) throw std::invalid_argument("distortion_at_rate: negative rate");
  if (rate_target == 0.0) {
    out.value = prob.min_constant_distortion();
    out.exact_zero = true;
    return out;
  }
  if (prob.repro_covers_support &&
      rate_target >= prob.source_entropy() / double(prob.n) - 1e-13) {
    out.value = 0.0;
    out.exact_zero = true;
    return out;
  }
  // Points are sorted by increasing distortion = decreasing rate.
  auto top_rate = [&]() { return curve.points.front().rate; };
  if (top_rate() < rate_target) {
    double beta = 0;
    for (const auto& pt : curve.points) beta = std::max(beta, pt.beta);
    beta = std::max(beta, 1.0);
    for (int i = 0; i < 16 && top_rate() < rate_target; ++i) {
      beta *= 4;
      curve.insert_sorted(blahut_arimoto(prob, beta));
      if (beta > std::pow(2.0, 26)) break;
    }
  }
  for (int round = 0; round < 80; ++round) {
    size_t idx = 0;  // first point with rate <= target
    while (idx < curve.points.size() && curve.points[idx].rate > rate_target) ++idx;
    if (idx == 0) {
      out.value = curve.points.front().distortion;
      out.below = out.above = curve.points.front();
      return out;
    }
    if (idx == curve.points.size()) idx = curve.points.size() - 1;
    const BAPoint high_rate = curve.points[idx - 1];  // smaller distortion
    const BAPoint low_rate = curve.points[idx];
    if (low_rate.distortion - high_rate.distortion <= tol ||
        high_rate.rate - low_rate.rate <= 1e-13) {
      out.value = interp_distortion(high_rate, low_rate, rate_target);
      out.below = high_rate;
      out.above = low_rate;
      return out;
    }
    double beta = low_rate.beta <= 0 ? std::max(high_rate.beta / 2.0, 1e-9)
                                     : std::sqrt(std::max(high_rate.beta, 1e-9) * low_rate.beta);
    size_t before = curve.points.size();
    curve.insert_sorted(blahut_arimoto(prob, beta));
    if (curve.points.size() == before) {
      out.value = interp_distortion(high_rate, low_rate, rate_target);
      out.below = high_rate;
      out.above = low_rate;
      return out;
    }
  }
  size_t idx = 1;
  while (idx < curve.points.size() && curve.points[idx].rate > rate_target) ++idx;
  idx = std::min(idx, curve.points.size() - 1);
  out.below = curve.points[idx - 1];
  out.above = curve.points[idx];
  out.value = interp_distortion(out.below, out.above, rate_target);
  return out;
}

RdValue rd_value(const MeasureSpec& mu, int n, double p, double eps,
                 DistortionProblem::Repro repro) {
  if (eps <= 0) throw std::domain_error("rd_value: eps must be positive");
  RdValue out;
  if (eps >= mu.alphabet.diam()) {
    out.rate = 0.0;  // constant reproduction meets the budget
    out.bracket.exact_zero = true;
    return out;
  }
  DistortionProblem prob = DistortionProblem::from_measure(mu, n, p, repro);
  if (prob.n_source() <= 1) {
    out.rate = 0.0;
    out.bracket.exact_zero = true;
    return out;
  }
  RDCurve curve = sweep_rd_curve(prob);
  out.bracket = rate_at_distortion(curve, prob, std::pow(eps, p), 1e-6);
  out.rate = out.bracket.value;
  return out;
}

PerNTable rd_limit_estimate(const MeasureSpec& mu, double p, double eps, int n_lo, int n_hi) {
  if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("rd_limit_estimate: bad n range");
  PerNTable out;
  double run = std::numeric_limits<double>::infinity();
  for (int n = n_lo; n <= n_hi; ++n) {
    double v = rd_value(mu, n, p, eps).rate;
    run = std::min(run, v);
    out.ns.push_back(n);
    out.values.push_back(v);
    out.running_min.push_back(run);
  }
  out.value = run;
  return out;
}

double distortion_rate(const MeasureSpec& mu, int n, double p, double rate_budget) {
  if (rate_budget < 0) throw std::invalid_argument("distortion_rate: negative budget");
  DistortionProblem prob = DistortionProblem::from_measure(mu, n, p);
  if (rate_budget == 0.0)
    return std::pow(prob.min_constant_distortion(), 1.0 / p);
  if (prob.n_source() <= 1) return 0.0;
  RDCurve curve = sweep_rd_curve(prob);
  CurveQuery q = distortion_at_rate(curve, prob, rate_budget, 1e-8);
  return std::pow(std::max(0.0, q.value), 1.0 / p);
}

CheckReport rd_inverse_check(const MeasureSpec& mu, int n, double p,
                             const std::vector<double>& rate_grid, double tol) {
  CheckReport rep;
  rep.name = "distortion-rate inverse";
  rep.tolerance = tol;
  DistortionProblem prob = DistortionProblem::from_measure(mu, n, p);
  if (prob.n_source() <= 1) {
    rep.all_ok = true;  // vacuous: D(R) = 0 everywhere
    return rep;
  }
  RDCurve curve = sweep_rd_curve(prob);

  std::vector<double> ds;
  for (double r : rate_grid) {
    CurveQuery dq = distortion_at_rate(curve, prob, r, 1e-9);
    double dist = dq.value;  // E[(1/n) sum d^p]
    CheckRow row;
    row.x = r;
    if (dist <= 1e-12) {
      row.note = "D(R)=0, outside the invertible set; skipped";
      row.ok = true;
      rep.rows.push_back(row);
      continue;
    }
    CurveQuery rq = rate_at_distortion(curve, prob, dist, 1e-9);
    row.lhs = rq.value;
    row.rhs = r;
    row.residual = std::fabs(rq.value - r);
    row.ok = row.residual <= tol;
    if (!row.ok) rep.all_ok = false;
    rep.rows.push_back(row);
    ds.push_back(dist);
  }
  if (curve.worst_monotonicity_violation() > 1e-8) {
    rep.all_ok = false;
    CheckRow row;
    row.note = "curve monotonicity violated";
    row.ok = false;
    rep.rows.push_back(row);
  }
  if (curve.worst_convexity_violation() > 1e-8) {
    rep.all_ok = false;
    CheckRow row;
    row.note = "curve convexity violated";
    row.ok = false;
    rep.rows.push_back(row);
  }
  return rep;
}

CheckReport decomposition_inequality_check(const MeasureSpec& mu, int n, double p,
                                           const std::vector<double>& rate_grid, double tol) {
  CheckReport rep;
  rep.name = "finite-n surrogate: mixture distortion vs component average";
  rep.tolerance = tol;
  auto comps = ergodic_components(mu);
  for (double r : rate_grid) {
    CheckRow row;
    row.x = r;
    if (r == 0.0) {
      // Exact constant-reproduction distortions on both sides.
      DistortionProblem pm = DistortionProblem::from_measure(mu, n, p);
      row.lhs = std::pow(pm.min_constant_distortion(), 1.0 / p);
      double rhs = 0;
      for (auto& [w, c] : comps) {
        DistortionProblem pc = DistortionProblem::from_measure(c, n, p);
        rhs += w * std::pow(pc.min_constant_distortion(), 1.0 / p);
      }
      row.rhs = rhs;
      row.note = "exact (constant reproduction)";
    } else {
      row.lhs = distortion_rate(mu, n, p, r);
      double rhs = 0;
      for (auto& [w, c] : comps) rhs += w * distortion_rate(c, n, p, r);
      row.rhs = rhs;
    }
    row.residual = row.lhs - row.rhs;
    row.ok = row.lhs <= row.rhs + tol;
    if (!row.ok) rep.all_ok = false;
    rep.rows.push_back(row);
  }
  return rep;
}

DominanceReport ergodic_dominance_check(const MeasureSpec& mu, double p,
                                        const std::vector<double>& distortion_grid, int n,
                                        double tol) {
  DominanceReport rep;
  rep.tolerance = tol;
  auto comps = ergodic_components(mu);
  for (auto& [w, c] : comps) rep.component_labels.push_back(c.label);
  for (double d : distortion_grid) {
    DominanceRow row;
    row.distortion = d;
    row.mixture_rate = rd_value(mu, n, p, d).rate;
    row.max_component_rate = -1;
    for (size_t i = 0; i < comps.size(); ++i) {
      double v = rd_value(comps[i].second, n, p, d).rate;
      if (v > row.max_component_rate) {
        row.max_component_rate = v;
        row.dominating_component = int(i);
      }
    }
    row.ok = row.mixture_rate <= row.max_component_rate + tol;
    if (!row.ok) rep.all_ok = false;
    rep.rows.push_back(row);
  }
  return rep;
}

DimensionEstimate rd_dimension(const MeasureSpec& mu, double p, std::vector<double> eps_grid,
                               int n) {
  std::vector<double> values;
  for (double eps : eps_grid) values.push_back(rd_value(mu, n, p, eps).rate);
  auto d = make_dimension_estimate(eps_grid, std::move(values), "dim_R,p=" + format_double(p));
  double resolution = mu.alphabet.size() > 1 ? mu.alphabet.gap() : 0.0;
  for (double eps : eps_grid)
    if (eps < resolution)
      d.flags.push_back("saturated: eps=" + format_double(eps) + " below alphabet gap");
  return d;
}

}  // namespace mdimlab
