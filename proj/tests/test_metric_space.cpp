#include <cmath>

#include "doctest.h"
#include "mdimlab/metric_space.hpp"
#include "mdimlab/shift_space.hpp"
#include "oracles.hpp"

using namespace mdimlab;

namespace {

// Random metric by shortest-path completion of a random weight matrix.
FiniteMetricSystem random_system(int count, uint64_t seed) {
  CounterRng rng{seed, 0};
  std::vector<double> d(size_t(count) * count, 0.0);
  uint64_t ctr = 0;
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < i; ++j) {
      double v = 0.05 + rng.uniform(ctr++);
      d[size_t(i) * count + j] = v;
      d[size_t(j) * count + i] = v;
    }
  // Floyd-Warshall to enforce the triangle inequality.
  for (int k = 0; k < count; ++k)
    for (int i = 0; i < count; ++i)
      for (int j = 0; j < count; ++j)
        d[size_t(i) * count + j] = std::min(d[size_t(i) * count + j],
                                            d[size_t(i) * count + k] + d[size_t(k) * count + j]);
  // Random permutation dynamics.
  std::vector<int> perm(count);
  for (int i = 0; i < count; ++i) perm[i] = i;
  for (int i = count - 1; i > 0; --i) {
    int j = int(rng.uniform(ctr++) * (i + 1));
    std::swap(perm[i], perm[j]);
  }
  return FiniteMetricSystem::create(std::move(d), std::move(perm), "random");
}

}  // namespace

TEST_CASE("bowen distance basics") {
  auto sys = random_system(7, 11);
  SUBCASE("n = 1 is the base metric") {
    for (int i = 0; i < sys.count; ++i)
      for (int j = 0; j < sys.count; ++j)
        CHECK(bowen_distance(sys, i, j, 1) == doctest::Approx(sys.d(i, j)));
  }
  SUBCASE("nondecreasing in n and above the base metric") {
    for (int n = 2; n <= 5; ++n)
      for (int i = 0; i < sys.count; ++i)
        for (int j = 0; j < sys.count; ++j) {
          CHECK(bowen_distance(sys, i, j, n) >= bowen_distance(sys, i, j, n - 1) - 1e-15);
          CHECK(bowen_distance(sys, i, j, n) >= sys.d(i, j) - 1e-15);
        }
  }
  SUBCASE("matches a direct orbit maximum") {
    for (int i = 0; i < sys.count; ++i)
      for (int j = 0; j < sys.count; ++j) {
        int a = i, b = j;
        double mx = 0;
        for (int k = 0; k < 4; ++k) {
          mx = std::max(mx, sys.d(a, b));
          a = sys.dynamics[a];
          b = sys.dynamics[b];
        }
        CHECK(bowen_distance(sys, i, j, 4) == doctest::Approx(mx));
      }
  }
  SUBCASE("invalid index") {
    CHECK_THROWS_AS(bowen_distance(sys, -1, 0, 2), std::domain_error);
  }
}

TEST_CASE("bowen metric stays a metric") {
  auto sys = random_system(9, 3);
  for (int n : {2, 4}) {
    auto m = bowen_matrix(sys, n);
    const int P = sys.count;
    for (int i = 0; i < P; ++i)
      for (int j = 0; j < P; ++j) {
        CHECK(m[i * P + j] == doctest::Approx(m[j * P + i]));
        for (int k = 0; k < P; ++k)
          CHECK(m[i * P + j] <= m[i * P + k] + m[k * P + j] + 1e-12);
      }
  }
}

TEST_CASE("rotation dynamics is an isometry, so rho_n = rho") {
  auto rot = build_rotation(1, 4);
  CHECK(rot.isometric_dynamics());
  for (int n : {2, 3, 7}) {
    auto m = bowen_matrix(rot, n);
    for (int i = 0; i < rot.count; ++i)
      for (int j = 0; j < rot.count; ++j)
        CHECK(m[i * rot.count + j] == doctest::Approx(rot.d(i, j)));
  }
}

TEST_CASE("covering number basics") {
  SUBCASE("one point") {
    auto one = FiniteMetricSystem::create({0.0}, {0}, "pt");
    auto r = covering_number(one, 0.5);
    CHECK(r.exact);
    CHECK(r.upper == 1);
  }
  SUBCASE("two points at distance one, eps = 1: one set of diameter 1") {
    auto two = FiniteMetricSystem::create({0, 1, 1, 0}, {0, 1}, "pair");
    auto r = covering_number(two, 1.0);
    CHECK(r.exact);
    CHECK(r.upper == 1);
  }
  SUBCASE("evenly spaced points below the spacing need singletons") {
    for (int m : {4, 8, 12}) {
      std::vector<double> d(size_t(m) * m, 0.0);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) d[size_t(i) * m + j] = std::abs(i - j) / double(m - 1);
      std::vector<int> id(m);
      for (int i = 0; i < m; ++i) id[i] = i;
      auto sys = FiniteMetricSystem::create(std::move(d), std::move(id), "grid");
      CoveringOptions opts;
      opts.exact_max_candidates = 4096;
      auto r = covering_number(sys, 0.9 / (m - 1), opts);
      CHECK(r.exact);
      CHECK(r.upper == m);
      CHECK(oracles::cover_dp(m, [&](int i, int j) { return sys.d(i, j); },
                              0.9 / (m - 1)) == m);
    }
  }
  SUBCASE("eps <= 0 rejected") {
    auto one = FiniteMetricSystem::create({0.0}, {0}, "pt");
    CHECK_THROWS_AS(covering_number(one, 0.0), std::domain_error);
  }
}

TEST_CASE("random systems: bracket ordering and independent exact oracle") {
  CoveringOptions opts;
  opts.exact_max_points = 12;
  opts.exact_max_candidates = 100000;
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    int count = 3 + int(CounterRng{seed, 9}.uniform(0) * 10);
    auto sys = random_system(count, seed);
    CounterRng rng{seed, 1};
    double eps = sys.min_positive_distance() +
                 rng.uniform(0) * (sys.diam - sys.min_positive_distance());
    auto dist = [&](int i, int j) { return sys.d(i, j); };
    auto exact = covering_number(count, dist, eps, opts);
    REQUIRE(exact.exact);
    CoveringOptions bracket_only;
    bracket_only.exact_max_points = 0;
    auto bracket = covering_number(count, dist, eps, bracket_only);
    CHECK(bracket.lower <= exact.upper);
    CHECK(exact.upper <= bracket.upper);
    CHECK(exact.upper == oracles::cover_dp(count, dist, eps));
  }
}

TEST_CASE("covering number is nonincreasing in eps") {
  auto sys = random_system(10, 77);
  CoveringOptions opts;
  opts.exact_max_points = 12;
  opts.exact_max_candidates = 100000;
  long long prev = -1;
  for (double eps = 0.05; eps < sys.diam * 1.1; eps += 0.08) {
    auto r = covering_number(sys, eps, opts);
    REQUIRE(r.exact);
    if (prev >= 0) CHECK(r.upper <= prev);
    prev = r.upper;
  }
}

TEST_CASE("lebesgue number") {
  SUBCASE("whole-space cover returns the diameter") {
    auto sys = random_system(6, 5);
    Cover whole;
    whole.sets.push_back({0, 1, 2, 3, 4, 5});
    CHECK(lebesgue_number(sys, whole) == doctest::Approx(sys.diam));
  }
  SUBCASE("singleton cover stays at or below the minimum gap") {
    auto sys = random_system(6, 6);
    Cover singles;
    for (int i = 0; i < sys.count; ++i) singles.sets.push_back({i});
    CHECK(lebesgue_number(sys, singles) <= sys.min_positive_distance() + 1e-12);
    CHECK(lebesgue_number(sys, singles) > 0);
  }
}

TEST_CASE("eps/4-net ball cover construction") {
  SUBCASE("one point") {
    auto one = FiniteMetricSystem::create({0.0}, {0}, "pt");
    Cover c = lebesgue_cover(one, 0.7);
    CHECK(c.sets.size() == 1);
    CHECK(c.sets[0] == std::vector<int>{0});
  }
  SUBCASE("two points, huge eps: single covering ball") {
    auto two = FiniteMetricSystem::create({0, 1, 1, 0}, {0, 1}, "pair");
    Cover c = lebesgue_cover(two, 4.0);
    CHECK(c.sets.size() == 1);
    CHECK(c.sets[0].size() == 2);
  }
  SUBCASE("8-point circle at eps = 0.5 meets both bounds exactly") {
    auto rot = build_rotation(1, 8);
    Cover c = lebesgue_cover(rot, 0.5);
    CHECK(cover_diameter(rot, c) <= 0.5 + 1e-12);
    CHECK(lebesgue_number(rot, c) >= 0.125 - 1e-12);
  }
  SUBCASE("bounds hold on randomized systems and scales") {
    for (uint64_t seed = 40; seed < 52; ++seed) {
      auto sys = random_system(4 + int(seed % 9), seed);
      CounterRng rng{seed, 2};
      double eps = sys.min_positive_distance() + rng.uniform(0) * sys.diam;
      Cover c = lebesgue_cover(sys, eps);
      CHECK(cover_diameter(sys, c) <= eps + 1e-12);
      CHECK(lebesgue_number(sys, c) >= eps / 4 - 1e-12);
    }
  }
}

TEST_CASE("cover join counts") {
  SUBCASE("whole-space cover joins to one set") {
    auto sys = random_system(6, 21);
    Cover whole;
    whole.sets.push_back({0, 1, 2, 3, 4, 5});
    for (int n : {1, 2, 4}) {
      auto j = cover_join_count(sys, whole, n);
      CHECK(j.exact);
      CHECK(j.value == 1);
    }
  }
  SUBCASE("identity dynamics: join of a partition with itself") {
    std::vector<double> d = {0, 0.3, 0.9, 0.3, 0, 0.7, 0.9, 0.7, 0};
    auto sys = FiniteMetricSystem::create(d, {0, 1, 2}, "id3");
    Cover parts;
    parts.sets.push_back({0, 1});
    parts.sets.push_back({2});
    auto j1 = cover_join_count(sys, parts, 1);
    for (int n : {2, 3}) {
      auto jn = cover_join_count(sys, parts, n);
      CHECK(jn.exact);
      CHECK(jn.value == j1.value);
    }
  }
  SUBCASE("coordinate cylinder cover of the 2-shift window: join count 8 at n=3") {
    ShiftWindowSystem shift = build_full_shift(2, 1, 3);
    FiniteMetricSystem fms = shift.to_metric_system();
    Cover cyl;
    cyl.sets.resize(2);
    auto words = shift.enumerate_words(true, 1 << 12);
    for (size_t i = 0; i < words.size(); ++i) cyl.sets[words[i][shift.window]].push_back(int(i));
    auto j = cover_join_count(fms, cyl, 3);
    CHECK(j.exact);
    CHECK(j.value == 8);
    SUBCASE("join counts are submultiplicative") {
      auto j1 = cover_join_count(fms, cyl, 1);
      auto j2 = cover_join_count(fms, cyl, 2);
      CHECK(j.value <= j1.value * j2.value);
    }
  }
}

TEST_CASE("sandwich report on small systems") {
  SUBCASE("whole-space cover") {
    auto sys = random_system(5, 31);
    Cover whole;
    whole.sets.push_back({0, 1, 2, 3, 4});
    CoveringOptions opts;
    opts.exact_max_points = 12;
    opts.exact_max_candidates = 100000;
    auto rep = sandwich_check(sys, whole, 3, opts);
    CHECK(!rep.skipped);
    CHECK(rep.all_hold);
  }
  SUBCASE("rotation with a ball cover: all quantities constant in n") {
    auto rot = build_rotation(1, 8);
    Cover c = lebesgue_cover(rot, 0.4);
    CoveringOptions opts;
    opts.exact_max_points = 12;
    opts.exact_max_candidates = 100000;
    auto rep = sandwich_check(rot, c, 4, opts);
    CHECK(!rep.skipped);
    CHECK(rep.all_hold);
    for (const auto& row : rep.rows) {
      CHECK(row.cover_at_diam.upper == rep.rows[0].cover_at_diam.upper);
      CHECK(row.join.value == rep.rows[0].join.value);
      CHECK(row.cover_at_leb.upper == rep.rows[0].cover_at_leb.upper);
    }
  }
  SUBCASE("oversized systems are skipped, not faked") {
    auto sys = random_system(40, 4);
    Cover whole;
    std::vector<int> all;
    for (int i = 0; i < 40; ++i) all.push_back(i);
    whole.sets.push_back(all);
    auto rep = sandwich_check(sys, whole, 2);
    CHECK(rep.skipped);
  }
}

TEST_CASE("disjoint cylinder cover: sandwich holds with equality below the gap") {
  // Cover by cylinders fixing coordinates [-1, 2) of the 2-symbol window.
  ShiftWindowSystem shift = build_full_shift(2, 1, 3);
  FiniteMetricSystem fms = shift.to_metric_system();
  auto words = shift.enumerate_words(true, 1 << 12);
  std::map<std::vector<uint8_t>, std::vector<int>> cells;
  for (size_t i = 0; i < words.size(); ++i) {
    std::vector<uint8_t> key(words[i].begin(), words[i].begin() + 3);
    cells[key].push_back(int(i));
  }
  Cover cyl;
  for (auto& [k, pts] : cells) cyl.sets.push_back(pts);
  CoveringOptions opts;
  opts.exact_max_points = 40;
  opts.exact_max_candidates = 100000;
  auto rep = sandwich_check(fms, cyl, 3, opts);
  CHECK(!rep.skipped);
  CHECK(rep.all_hold);
  CHECK(rep.diam_u < shift.alphabet.gap());
  for (const auto& row : rep.rows) {
    CHECK(row.cover_at_diam.exact);
    CHECK(row.cover_at_leb.exact);
    // Equality of all three quantities at this scale.
    CHECK(row.cover_at_diam.upper == row.join.value);
    CHECK(row.join.value == row.cover_at_leb.upper);
  }
}

TEST_CASE("growth rates") {
  SUBCASE("one-point system: counts 1, rate 0") {
    auto one = FiniteMetricSystem::create({0.0}, {0}, "pt");
    auto g = growth_rate(one, 0.5, 1, 5);
    for (double v : g.log_upper) CHECK(v == doctest::Approx(0.0));
    CHECK(g.rate == doctest::Approx(0.0));
  }
  SUBCASE("rational rotation: counts constant in n, rate 0") {
    auto rot = build_rotation(1, 8);
    for (double eps : {0.1, 0.3}) {
      auto g = growth_rate(rot, eps, 1, 6);
      CHECK(g.rate == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(g.rate_lower == doctest::Approx(0.0));
      CHECK(g.rate_upper == doctest::Approx(0.0));
    }
  }
  SUBCASE("2-symbol full shift at eps below the gap: rate within 5% of log 2") {
    ShiftWindowSystem shift = build_full_shift(2, 5, 8);
    ShiftCountingOracle oracle(shift, false);
    auto g = growth_rate(oracle, 0.4, 2, 8);
    CHECK(std::fabs(g.rate - std::log(2.0)) / std::log(2.0) < 0.05);
    CHECK(g.rate_lower <= g.rate_upper);
  }
}

TEST_CASE("oracle brackets contain enumerated counts on small windows") {
  ShiftWindowSystem shift = build_full_shift(2, 2, 3);
  FiniteMetricSystem fms = shift.to_metric_system();
  CoveringOptions opts;
  opts.exact_max_points = 0;  // greedy+packing brackets
  for (double eps : {0.3, 0.45, 1.0}) {
    for (int n = 1; n <= 3; ++n) {
      auto enumerated = bowen_covering_number(fms, eps, n, opts);
      auto symbolic = ShiftCountingOracle(shift, false).count(n, eps);
      CHECK(symbolic.log_lo <= enumerated.log_hi + 1e-9);
      CHECK(enumerated.log_lo <= symbolic.log_hi + 1e-9);
    }
  }
}

TEST_CASE("exact-mode subadditivity of Bowen covering counts") {
  ShiftWindowSystem shift = build_full_shift(2, 1, 4);
  FiniteMetricSystem fms = shift.to_metric_system();
  CoveringOptions opts;
  opts.exact_max_points = 40;
  opts.exact_max_candidates = 100000;
  for (double eps : {0.3, 0.6}) {
    std::vector<double> logc(5, 0.0);
    bool all_exact = true;
    for (int n = 1; n <= 4; ++n) {
      auto r = bowen_covering_number(fms, eps, n, opts);
      all_exact = all_exact && r.exact;
      logc[n] = r.log_hi;
    }
    if (!all_exact) continue;
    for (int a = 1; a <= 2; ++a)
      for (int b = 1; a + b <= 4; ++b) CHECK(logc[a + b] <= logc[a] + logc[b] + 1e-9);
  }
}

TEST_CASE("tame growth table") {
  SUBCASE("fixed finite space: products tend to zero for delta > 0") {
    std::vector<std::pair<double, CountResult>> counts;
    for (double eps : {0.25, 0.125, 0.0625, 0.03125, 0.015625})
      counts.push_back({eps, CountResult::from_counts(16, 16, true, "fixed")});
    auto rep = tame_growth_table(counts, {0.0, 0.5, 1.0});
    CHECK(!rep.verdicts[0].trending_to_zero);  // delta = 0 fails by definition
    CHECK(rep.verdicts[1].trending_to_zero);
    CHECK(rep.verdicts[2].trending_to_zero);
  }
  SUBCASE("discretized interval: eps^0.5 log(1/eps) decays over the dyadic grid") {
    std::vector<std::pair<double, CountResult>> counts;
    for (int k = 2; k <= 10; ++k) {
      double eps = std::pow(2.0, -k);
      int pts = int(std::ceil(2.0 / eps)) + 1;
      auto c = covering_number(
          pts, [&](int i, int j) { return std::abs(i - j) / double(pts - 1); }, eps);
      counts.push_back({eps, c});
    }
    auto rep = tame_growth_table(counts, {0.0, 0.5});
    CHECK(!rep.verdicts[0].trending_to_zero);
    CHECK(rep.verdicts[1].trending_to_zero);
    // Closed form: value should track eps^0.5 * log(1/eps) within a constant.
    for (const auto& row : rep.rows) {
      if (row.delta == 0.5) {
        double ref = std::sqrt(row.eps) * std::log(2.0 / row.eps);
        CHECK(row.value <= ref * 2.5);
      }
    }
  }
}
