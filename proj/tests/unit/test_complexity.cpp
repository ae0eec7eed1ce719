#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <tuple>

#include "gen.hpp"
#include "nilflow/complexity.hpp"
#include "nilflow/errors.hpp"

using namespace nilflow;
namespace tg = nilflow::testgen;

TEST(Maps, ParseAndPrint) {
  for (MapChoice m : {MapChoice::S, MapChoice::T1, MapChoice::TildeT1})
    EXPECT_EQ(parse_map_choice(to_string(m)), m);
  EXPECT_THROW(parse_map_choice("T2"), InputError);
}

TEST(Maps, ApplyMatchesIterates) {
  SkewSystem sys = tg::cos_system(AlphaSpec::golden());
  tg::Rng r(51);
  for (int i = 0; i < 20; ++i) {
    PhasePoint u = tg::phase_point(r);
    long long j = tg::integer(r, 0, 500);
    EXPECT_LT(dist_phase(apply_map(sys, MapChoice::S, u, j), iterate(sys, u, j)), 1e-12);
    EXPECT_LT(dist_phase(apply_map(sys, MapChoice::T1, u, j), iterate_T1(sys, u, j)), 1e-12);
    EXPECT_LT(dist_phase(apply_map(sys, MapChoice::TildeT1, u, j), tilde_T1_iterate(sys, u, j)), 1e-12);
  }
}

TEST(Dbar, Basics) {
  tg::Rng r(52);
  SkewSystem sys = tg::random_system(r);
  for (int i = 0; i < 20; ++i) {
    PhasePoint u = tg::phase_point(r), v = tg::phase_point(r);
    EXPECT_NEAR(dbar(sys, u, u, 50, MapChoice::S), 0, 1e-15);
    EXPECT_NEAR(dbar(sys, u, v, 1, MapChoice::S), dist_phase(u, v), 1e-15);
    EXPECT_EQ(dbar(sys, u, v, 37, MapChoice::S), dbar(sys, v, u, 37, MapChoice::S));
    double d = dbar(sys, u, v, 37, MapChoice::T1);
    EXPECT_GE(d, 0);
    EXPECT_LE(d, std::sqrt(0.5) + 1e-12);
  }
}

TEST(Dbar, DirectAverage) {
  tg::Rng r(53);
  SkewSystem sys = tg::random_system(r);
  PhasePoint u = tg::phase_point(r), v = tg::phase_point(r);
  double s = 0;
  PhasePoint a = u, b = v;
  for (int j = 0; j < 100; ++j) {
    s += dist_phase(a, b);
    a = step(sys, a);
    b = step(sys, b);
  }
  EXPECT_NEAR(dbar(sys, u, v, 100, MapChoice::S), s / 100, 1e-9);
}

TEST(Dbar, LongOrbitsAreSampled) {
  SkewSystem sys = tg::cos_system(AlphaSpec::golden());
  PhasePoint u = PhasePoint::make(0.1, HeisElt{});
  Trajectory t = trajectory(sys, MapChoice::S, u, 100000, 1000);
  EXPECT_TRUE(t.sampled());
  EXPECT_EQ(t.times.size(), 1000u);
  EXPECT_EQ(t.points.size(), 1000u);
  for (std::size_t i = 1; i < t.times.size(); ++i) EXPECT_LT(t.times[i - 1], t.times[i]);
  EXPECT_LT(t.times.back(), 100000);
  Trajectory e = trajectory(sys, MapChoice::S, u, 500, 1000);
  EXPECT_FALSE(e.sampled());
}

TEST(Grid, SmallestCase) {
  GridStream g(1.0, 2.0, 1);
  EXPECT_EQ(g.time_steps(), 2u);
  EXPECT_EQ(g.space_steps(), 2u);
  EXPECT_EQ(g.count(), 16u);
  EXPECT_TRUE(g.formula_exact());
  EXPECT_THROW(GridStream(1.0, 1.0, 1), InputError);
  EXPECT_THROW(GridStream(0.0, 2.0, 1), InputError);
  EXPECT_THROW(GridStream(0.5, 4.0, 0), InputError);
  EXPECT_THROW(GridStream(1e-6, 1e7, 1000), CapacityError);
}

TEST(Grid, FormulaWhenStepsAreIntegral) {
  // eps = 1/8, L = 16, q = 3: q^2 L / eps = 1152 and q L = 48
  GridStream g(0.125, 16.0, 3);
  EXPECT_EQ(g.time_steps(), 1152u);
  EXPECT_EQ(g.space_steps(), 48u);
  EXPECT_EQ(g.count(), 1152ull * 48 * 48 * 48);
  EXPECT_TRUE(g.formula_exact());
  EXPECT_NEAR(g.dt(), 1.0 / 1152, 1e-18);
  EXPECT_NEAR(g.dx(), 1.0 / 48, 1e-18);
}

TEST(Grid, IndexRoundTripAndDistinctPoints) {
  GridStream g(0.5, 3.0, 2);
  std::set<std::tuple<double, double, double, double>> seen;
  for (std::uint64_t i = 0; i < g.count(); ++i) {
    GridIndex gi = g.index(i);
    ASSERT_EQ(g.flat(gi), i);
    PhasePoint p = g.point(gi);
    seen.insert({p.t, p.p.rep().x, p.p.rep().y, p.p.rep().z});
  }
  EXPECT_EQ(seen.size(), g.count());
  std::uint64_t n = 0;
  g.for_each(0, g.count() + 10, [&](const PhasePoint&) { ++n; });
  EXPECT_EQ(n, g.count());
}

TEST(Grid, DefaultL) {
  SkewSystem sys = tg::cos_system(AlphaSpec::golden());
  double L = default_L(sys, 0.01);
  EXPECT_GE(L, 200.0);
  EXPECT_GE(L, 4 * kLMargin);
}

TEST(Cover, OneCenterAboveTheDiameter) {
  // All samples share t, so every orbit pair stays on one time slice, where
  // the nil distance is at most 1/2.
  SkewSystem sys = tg::cos_system(AlphaSpec::golden());
  auto pts = sample_points(300, 7);
  for (auto& p : pts) p.t = 0.25;
  CoverResult c = greedy_cover(sys, MapChoice::S, 20, 0.6, pts);
  EXPECT_EQ(c.s_n_upper, 1);
  EXPECT_EQ(c.covered_fraction, 1.0);
  EXPECT_FALSE(c.budget_exhausted);
}

TEST(Cover, EveryPointIsCoveredBelowEps) {
  SkewSystem sys = tg::cos_system(AlphaSpec::golden());
  auto pts = sample_points(400, 3);
  CoverResult c = greedy_cover(sys, MapChoice::S, 5, 0.2, pts);
  EXPECT_GT(c.covered_fraction, 1 - 0.2);
  EXPECT_EQ(c.centers.size(), static_cast<std::size_t>(c.s_n_upper));
  CoverResult b = greedy_cover(sys, MapChoice::S, 5, 0.2, pts, 2);
  EXPECT_LE(b.s_n_upper, 2);
  if (c.s_n_upper > 2) EXPECT_TRUE(b.budget_exhausted);
}

TEST(Cover, TildeT1IsAnIsometry) {
  SkewSystem sys = tg::cos_system(AlphaSpec::golden());
  auto pts = sample_points(300, 11);
  CoverResult c1 = greedy_cover(sys, MapChoice::TildeT1, 1, 0.15, pts);
  CoverResult c10 = greedy_cover(sys, MapChoice::TildeT1, 10, 0.15, pts);
  CoverResult c100 = greedy_cover(sys, MapChoice::TildeT1, 100, 0.15, pts);
  EXPECT_EQ(c1.s_n_upper, c10.s_n_upper);
  EXPECT_EQ(c1.s_n_upper, c100.s_n_upper);
  EXPECT_EQ(c1.centers, c100.centers);
}

TEST(Cover, ThreadIndependent) {
  SkewSystem sys = tg::cos_system(AlphaSpec::golden());
  auto pts = sample_points(300, 5);
  CoverResult a = greedy_cover(sys, MapChoice::T1, 30, 0.2, pts, -1, 1);
  CoverResult b = greedy_cover(sys, MapChoice::T1, 30, 0.2, pts, -1, 4);
  EXPECT_EQ(a.centers, b.centers);
}

TEST(Subpoly, RatioFallsLikeOneOverQ) {
  RotationNumber a = expand_cf(AlphaSpec::golden(), 40);
  SubpolyVerdict v = subpoly_trend(a, {4, 8, 12, 16}, 0.01, 200.0, 0.5);
  ASSERT_EQ(v.rows.size(), 4u);
  EXPECT_TRUE(v.decreasing);
  EXPECT_DOUBLE_EQ(v.rows[0].B, 13.0);
  for (std::size_t i = 1; i < v.ratio_times_q.size(); ++i)
    EXPECT_NEAR(static_cast<double>(v.ratio_times_q[i] / v.ratio_times_q[0]), 1.0, 1e-9);
  // eps^-1 L^4
  EXPECT_NEAR(static_cast<double>(v.ratio_times_q[0]), 100.0 * std::pow(200.0, 4), 1e-3);
  std::string csv = subpoly_csv(v);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,q_k,n_k,grid_count,s_n_upper,ratio,tau,B");
  EXPECT_THROW(subpoly_trend(a, {4, 8}, 0.01, 200.0, 0.5), InputError);
}

TEST(Adjacency, ReportShape) {
  SkewSystem sys = tg::cos_system(AlphaSpec::golden());
  AdjacencyReport r = adjacency_check(sys, 0.5, 4.0, 3, 50, 17, 2);
  EXPECT_EQ(r.q_k, 3u);
  EXPECT_TRUE(r.exploratory);
  EXPECT_EQ(r.pairs, 50);
  EXPECT_LE(r.violations, r.pairs);
  EXPECT_GE(r.max_dbar, 0);
  EXPECT_LE(r.max_dbar, std::sqrt(0.5) + 1e-12);
  AdjacencyReport r2 = adjacency_check(sys, 0.5, 4.0, 3, 50, 17, 1);
  EXPECT_EQ(r.max_dbar, r2.max_dbar);
  EXPECT_EQ(r.violations, r2.violations);
  EXPECT_THROW(adjacency_check(sys, 0.5, 4.0, 99, 5, 1), RangeError);
}
