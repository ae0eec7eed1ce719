#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "nilflow/errors.hpp"
#include "nilflow/heisenberg.hpp"
#include "oracles.hpp"

using namespace nilflow;
namespace tg = nilflow::testgen;

namespace {
void expect_close(const HeisElt& a, const HeisElt& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

// The 3x3 matrix product, written out entry by entry.
HeisElt matmul(const HeisElt& g, const HeisElt& h) {
  double G[3][3] = {{1, g.y, g.z}, {0, 1, g.x}, {0, 0, 1}};
  double H[3][3] = {{1, h.y, h.z}, {0, 1, h.x}, {0, 0, 1}};
  double P[3][3] = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) P[i][j] += G[i][k] * H[k][j];
  return {P[1][2], P[0][1], P[0][2]};
}
}  // namespace

TEST(Heis, MulCrossTerms) {
  // top-middle a = 1, middle-right b = 2 times c = 3, d = 4
  HeisElt g{2, 1, 0}, h{4, 3, 0};
  HeisElt p = mul(g, h);
  EXPECT_EQ(p.y, 4);
  EXPECT_EQ(p.x, 6);
  EXPECT_EQ(p.z, 4);
  EXPECT_EQ(mul(h, g).z, 6);
  EXPECT_EQ(mul(g, HeisElt::identity()), g);
}

TEST(Heis, Inverse) {
  HeisElt g{1, 2, 3};
  EXPECT_EQ(inv(g).z, -1);
  EXPECT_EQ(inv(g).x, -1);
  EXPECT_EQ(inv(g).y, -2);
  EXPECT_EQ(inv(HeisElt::identity()), HeisElt::identity());
}

TEST(Heis, Kappa) {
  EXPECT_EQ(kappa(HeisElt::identity()), (std::array<double, 3>{0, 0, 0}));
  EXPECT_EQ(kappa(HeisElt{1, 2, 3}), (std::array<double, 3>{1, 2, 1}));
  EXPECT_EQ(kappa(HeisElt{0, 5, 7}), (std::array<double, 3>{0, 5, 7}));
}

TEST(Heis, GroupAxiomsRandom) {
  tg::Rng r(101);
  for (int i = 0; i < 10000; ++i) {
    HeisElt a = tg::heis(r), b = tg::heis(r), c = tg::heis(r);
    expect_close(mul(mul(a, b), c), mul(a, mul(b, c)), 1e-12);
    expect_close(mul(a, inv(a)), HeisElt::identity(), 1e-12);
    expect_close(mul(inv(a), a), HeisElt::identity(), 1e-12);
    expect_close(mul(a, b), matmul(a, b), 1e-12);
  }
}

TEST(Heis, ExactInRationalMode) {
  using R = boost::multiprecision::cpp_rational;
  using E = BasicHeisElt<R>;
  E a{R(1, 3), R(-2, 7), R(5, 11)}, b{R(4, 5), R(1, 2), R(-3, 8)}, c{R(2), R(-1, 9), R(7, 13)};
  EXPECT_EQ(mul(mul(a, b), c), mul(a, mul(b, c)));
  EXPECT_EQ(mul(a, inv(a)), E::identity());
}

TEST(Canonical, RangeAndIdempotence) {
  tg::Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    HeisElt g = tg::heis(r, 50);
    HeisElt c = canonicalize(g);
    EXPECT_GE(c.x, 0);
    EXPECT_LT(c.x, 1);
    EXPECT_GE(c.y, 0);
    EXPECT_LT(c.y, 1);
    EXPECT_GT(c.z, -0.5);
    EXPECT_LE(c.z, 0.5);
    EXPECT_EQ(canonicalize(c), c);
  }
}

TEST(Canonical, LatticeEquivalentElementsAgree) {
  tg::Rng r(8);
  for (int i = 0; i < 10000; ++i) {
    HeisElt g = tg::heis(r, 2);
    HeisElt gamma{static_cast<double>(tg::integer(r, -3, 3)), static_cast<double>(tg::integer(r, -3, 3)),
                  static_cast<double>(tg::integer(r, -3, 3))};
    NilPoint a = NilPoint::from(g), b = NilPoint::from(mul(gamma, g));
    EXPECT_TRUE(same_coset(a, b, 1e-9));
    EXPECT_LT(dist_nil_upper(a, b), 1e-9);
  }
}

TEST(Dist, Examples) {
  tg::Rng r(1);
  NilPoint p = NilPoint::from(tg::heis(r));
  EXPECT_EQ(dist_nil_upper(p, p), 0);
  HeisElt shifted = mul(p.rep(), HeisElt::central(3));
  EXPECT_LT(dist_nil_upper(p, NilPoint::from(shifted)), 1e-12);
  HeisElt Y{0.1, 0.2, 0.3};
  EXPECT_LE(dist_nil_upper(p, p.right_mul(Y)), 0.6 + 1e-12);
  PhasePoint u{0.2, p};
  PhasePoint v{0.7, p};
  EXPECT_NEAR(dist_phase(u, v), 0.5, 1e-15);
  EXPECT_EQ(dist_phase(u, u), 0);
  EXPECT_THROW(dist_nil_upper(p, p, 0), InputError);
}

TEST(Dist, SymmetricBitForBit) {
  tg::Rng r(2);
  for (int i = 0; i < 10000; ++i) {
    PhasePoint u = tg::phase_point(r), v = tg::phase_point(r);
    EXPECT_EQ(dist_phase(u, v), dist_phase(v, u));
  }
}

TEST(Dist, WindowAtLeastTwoIsExhaustive) {
  tg::Rng r(3);
  for (int i = 0; i < 3000; ++i) {
    NilPoint p = NilPoint::from(tg::heis(r)), q = NilPoint::from(tg::heis(r));
    double w1 = dist_nil_upper(p, q, 1), w2 = dist_nil_upper(p, q, 2), w3 = dist_nil_upper(p, q, 3),
           w6 = dist_nil_upper(p, q, 6);
    EXPECT_GE(w1, w2);
    EXPECT_EQ(w2, w3);
    EXPECT_EQ(w3, w6);
    double lo = std::min(oracle::dist_nil_exhaustive(p, q), oracle::dist_nil_exhaustive(q, p));
    EXPECT_NEAR(w3, lo, 1e-12);
  }
}

TEST(Dist, CentralLeftTranslationInvariant) {
  tg::Rng r(4);
  for (int i = 0; i < 5000; ++i) {
    HeisElt g = tg::heis(r), h = tg::heis(r);
    HeisElt c = HeisElt::central(tg::uniform(r, -2, 2));
    double d0 = dist_nil_upper(NilPoint::from(g), NilPoint::from(h));
    double d1 = dist_nil_upper(NilPoint::from(mul(c, g)), NilPoint::from(mul(c, h)));
    EXPECT_NEAR(d0, d1, 1e-12);
  }
}

TEST(Dist, BoundDominatesWindowedDistance) {
  tg::Rng r(5);
  for (int i = 0; i < 10000; ++i) {
    HeisElt g = tg::heis(r, 1), gs = tg::heis(r, 1), Y = tg::heis(r, 1), Ys = tg::heis(r, 1);
    double bound = dist_bound_eqdGammaG(g, gs, Y, Ys);
    double d = dist_nil_upper(NilPoint::from(mul(g, Y)), NilPoint::from(mul(gs, Ys)));
    EXPECT_GE(bound + 1e-12, d) << i;
  }
}

TEST(Dist, BoundExamples) {
  HeisElt g{0.3, 0.4, 0.1}, Y{0.2, 0.7, -0.3};
  EXPECT_EQ(dist_bound_eqdGammaG(g, g, Y, Y), 0);
  HeisElt Ys = mul(Y, HeisElt::central(1));
  EXPECT_NEAR(dist_bound_eqdGammaG(g, g, Y, Ys), 0, 1e-15);
}

// The kappa proxy is not subadditive (see the decisions ledger); this only
// guards against the violation rate growing.
TEST(Dist, TriangleViolationsStayRare) {
  tg::Rng r(6);
  int bad = 0;
  double worst = 0;
  const int N = 3000;
  for (int i = 0; i < N; ++i) {
    PhasePoint a = tg::phase_point(r), b = tg::phase_point(r), c = tg::phase_point(r);
    double ex = dist_phase(a, c) - dist_phase(a, b) - dist_phase(b, c);
    if (ex > 1e-9) {
      ++bad;
      worst = std::max(worst, ex);
    }
  }
  EXPECT_LT(bad, N / 100);
  EXPECT_LT(worst, 0.1);
}
