#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "nilflow/dynamics.hpp"
#include "nilflow/errors.hpp"
#include "oracles.hpp"

using namespace nilflow;
namespace tg = nilflow::testgen;

namespace {
double cdist(cplx a, cplx b) { return std::abs(a - b); }

SkewSystem rational_system(BigInt p, BigInt q, tg::Rng& r) {
  RotationNumber a = expand_cf(AlphaSpec::from_rational(p, q), 50);
  return SkewSystem::make(std::move(a), tg::real_trig(r, 3), tg::real_trig(r, 3), tg::real_trig(r, 3, 1.0, 0.5));
}
}  // namespace

TEST(Step, Examples) {
  // phi = eta = 0 and psi = 1: a pure central drift
  RotationNumber a = expand_cf(AlphaSpec::golden(), 25);
  SkewSystem sys = SkewSystem::make(a, PeriodicFn(), PeriodicFn(), PeriodicFn::constant(0.25));
  PhasePoint p = PhasePoint::make(0.5, HeisElt{0.1, 0.2, 0.0});
  PhasePoint s = step(sys, p);
  EXPECT_NEAR(s.t, std::fmod(0.5 + a.value(), 1.0), 1e-15);
  EXPECT_NEAR(s.p.rep().z, 0.25, 1e-15);
  EXPECT_NEAR(s.p.rep().x, 0.1, 1e-15);

  // phi = eta = cos, psi = sin at t = 0: Y = (1, 1, 0)
  SkewSystem cs = tg::cos_system(AlphaSpec::golden());
  PhasePoint q = step(cs, PhasePoint::make(0, HeisElt{}));
  EXPECT_NEAR(q.p.rep().x, 0, 1e-15);
  EXPECT_NEAR(q.p.rep().y, 0, 1e-15);
  EXPECT_NEAR(q.p.rep().z, 0, 1e-15);
  PhasePoint q2 = step(cs, q);
  HeisElt want = canonicalize(mul(HeisElt{1, 1, 0}, HeisElt{cs.eta().eval_re(a.value_ld()),
                                                           cs.phi().eval_re(a.value_ld()),
                                                           cs.psi().eval_re(a.value_ld())}));
  EXPECT_TRUE(same_coset(q2.p, NilPoint::from(want), 1e-14));
}

TEST(Step, IterateMatchesRepeatedSteps) {
  tg::Rng r(21);
  double worst = 0;
  for (int i = 0; i < 40; ++i) {
    SkewSystem sys = tg::random_system(r);
    PhasePoint p = tg::phase_point(r);
    long long n = tg::integer(r, 0, 600);
    PhasePoint a = iterate(sys, p, n), b = oracle::repeated_steps(sys, p, n);
    worst = std::max(worst, dist_phase(a, b));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Step, Cocycle) {
  tg::Rng r(22);
  for (int i = 0; i < 50; ++i) {
    SkewSystem sys = tg::random_system(r);
    long long m = tg::integer(r, 0, 300), n = tg::integer(r, 0, 300);
    long double t = tg::uniform(r, 0, 1);
    HeisElt lhs = iterate_matrix(sys, t, m + n);
    long double tm = t + sys.alpha().frac_mul(static_cast<i128>(m));
    HeisElt rhs = mul(iterate_matrix(sys, t, m), iterate_matrix(sys, tm, n));
    double scale = 1 + std::abs(lhs.z);
    EXPECT_NEAR(lhs.x, rhs.x, 1e-10);
    EXPECT_NEAR(lhs.y, rhs.y, 1e-10);
    EXPECT_NEAR(lhs.z, rhs.z, 1e-10 * scale);

    PhasePoint p = tg::phase_point(r);
    EXPECT_LT(dist_phase(iterate(sys, p, m + n), iterate(sys, iterate(sys, p, m), n)), 1e-9);
  }
}

TEST(ExpSums, AgainstBruteForce) {
  tg::Rng r(23);
  double worst = 0;
  for (int i = 0; i < 300; ++i) {
    RotationNumber a = expand_cf(tg::irrational(r), 25);
    long long u = tg::integer(r, -6, 6), v = tg::integer(r, -6, 6), n = tg::integer(r, 1, 80);
    if (u == 0) u = 1;
    cplx ref = oracle::double_sum(a.value_ld(), u, v, n);
    worst = std::max(worst, cdist(double_exp_sum(a, u, v, n), ref));
    worst = std::max(worst, cdist(expsum_w0(a, u, n), oracle::double_sum(a.value_ld(), u, -u, n)));
    worst = std::max(worst, cdist(expsum_w1(a, u, v, n), ref));
    if (v != 0) worst = std::max(worst, cdist(expsum_w2(a, u, v, n), ref));
    if (v != 0 && u + v != 0) worst = std::max(worst, cdist(expsum_w1w2(a, u, v, n), ref));
  }
  EXPECT_LT(worst, 1e-9);
}

// High-precision values computed independently and frozen.
TEST(ExpSums, FrozenValues) {
  RotationNumber g = expand_cf(AlphaSpec::golden(), 25);
  RotationNumber s = expand_cf(AlphaSpec::silver(), 25);
  cplx a = expsum_w0(g, 1, 10);
  EXPECT_NEAR(a.real(), -4.8341877731833887176, 1e-12);
  EXPECT_NEAR(a.imag(), 2.2046662950599690482, 1e-12);
  cplx b = double_exp_sum(g, 2, -1, 17);
  EXPECT_NEAR(b.real(), -0.40168439832773354119, 1e-12);
  EXPECT_NEAR(b.imag(), 0.36797581304732524334, 1e-12);
  cplx c = double_exp_sum(s, 3, 1, 25);
  EXPECT_NEAR(c.real(), -0.24708602226977102099, 1e-12);
  EXPECT_NEAR(c.imag(), 0.33941269759403782717, 1e-12);
}

TEST(ExpSums, ConjugationSymmetry) {
  tg::Rng r(24);
  for (int i = 0; i < 200; ++i) {
    RotationNumber a = expand_cf(tg::irrational(r), 25);
    long long u = tg::integer(r, -9, 9), v = tg::integer(r, -9, 9), n = tg::integer(r, 1, 5000);
    cplx w = double_exp_sum(a, u, v, n), wc = double_exp_sum(a, -u, -v, n);
    EXPECT_LT(cdist(w, std::conj(wc)), 1e-9 * (1 + std::abs(w)));
  }
}

TEST(ExpSums, ExactResonanceAtRational) {
  RotationNumber a = expand_cf(AlphaSpec::from_rational(2, 5), 10);
  // u = v = 5: every term is 1, so the sum counts pairs r < j < n
  EXPECT_LT(cdist(double_exp_sum(a, 5, 5, 11), cplx(55, 0)), 1e-12);
  EXPECT_LT(cdist(double_exp_sum(a, 5, 0, 11), cplx(55, 0)), 1e-12);
  for (long long u : {1LL, 3LL, 5LL})
    for (long long v : {-5LL, -2LL, 0LL, 4LL})
      EXPECT_LT(cdist(double_exp_sum(a, u, v, 40), oracle::double_sum(0.4L, u, v, 40)), 1e-9);
}

TEST(Birkhoff, MatchesDirectSums) {
  tg::Rng r(25);
  for (int i = 0; i < 30; ++i) {
    SkewSystem sys = tg::random_system(r);
    long long n = tg::integer(r, 1, 60);
    BirkhoffSums bs = birkhoff(sys, n);
    long double a = sys.alpha().value_ld();
    for (int k = 0; k < 5; ++k) {
      long double t = tg::uniform(r, 0, 1);
      EXPECT_LT(cdist(bs.Phi.eval(t), oracle::birkhoff_direct(sys.phi(), a, n, t)), 1e-10);
      EXPECT_LT(cdist(bs.xi.eval(t), oracle::birkhoff_direct(sys.eta(), a, n, t)), 1e-10);
      EXPECT_LT(cdist(bs.Omega.eval(t), oracle::birkhoff_direct(sys.psi(), a, n, t)), 1e-10);
      EXPECT_LT(cdist(bs.H.eval(t), oracle::H_direct(sys.phi(), sys.eta(), a, n, t)), 1e-9);
      EXPECT_LT(cdist(bs.Sigma.eval(t) + bs.Sigma_n0, bs.H.eval(t)), 1e-9);
      HeisElt M = iterate_matrix(sys, t, n);
      EXPECT_NEAR(M.y, bs.Phi.eval_re(t), 1e-10);
      EXPECT_NEAR(M.x, bs.xi.eval_re(t), 1e-10);
      EXPECT_NEAR(M.z, bs.Psi(t).real(), 1e-9);
    }
  }
}

TEST(Birkhoff, FrozenH) {
  SkewSystem sys = tg::cos_system(AlphaSpec::golden());
  EXPECT_NEAR(birkhoff(sys, 20).H.eval_re(0.1L), -4.2770768570572200086, 1e-11);
}

TEST(Birkhoff, SigmaZeroIsTheMean) {
  tg::Rng r(26);
  for (int i = 0; i < 10; ++i) {
    SkewSystem sys = tg::random_system(r);
    long long n = tg::integer(r, 2, 25);
    cplx s0 = birkhoff(sys, n).Sigma_n0;
    long double a = sys.alpha().value_ld();
    double q = oracle::midpoint_mean(
        [&](double t) { return oracle::H_direct(sys.phi(), sys.eta(), a, n, t).real(); }, 64);
    EXPECT_NEAR(s0.real(), q, 1e-10);
    EXPECT_NEAR(s0.imag(), 0, 1e-12);
  }
}

TEST(Birkhoff, OneStep) {
  tg::Rng r(27);
  SkewSystem sys = tg::random_system(r);
  BirkhoffSums bs = birkhoff(sys, 1);
  EXPECT_TRUE(bs.H.is_zero());
  EXPECT_EQ(bs.Sigma_n0, cplx(0, 0));
  EXPECT_LT(cdist(bs.Phi.eval(0.3L), sys.phi().eval(0.3L)), 1e-15);
  BirkhoffSums z = birkhoff(sys, 0);
  EXPECT_TRUE(z.Phi.is_zero());
  EXPECT_TRUE(z.Omega.is_zero());
  EXPECT_THROW(birkhoff(sys, -1), InputError);
  EXPECT_THROW(expsum_w1w2(sys.alpha(), 2, -2, 5), InputError);
}

TEST(Rational, BirkhoffLinearLaw) {
  tg::Rng r(28);
  for (auto [p, q] : {std::pair{1, 2}, {1, 3}, {2, 5}, {3, 7}}) {
    RotationNumber a = expand_cf(AlphaSpec::from_rational(p, q), 10);
    PeriodicFn h = tg::real_trig(r, 8, 1.0, 0.4);
    for (long long n : {1LL, 2LL, 7LL, 13LL, 50LL, 101LL}) {
      long double t = tg::uniform(r, 0, 1);
      cplx ref = oracle::birkhoff_direct(h, static_cast<long double>(p) / q, n, t);
      EXPECT_LT(cdist(rational_birkhoff(h, a, n, t), ref), 1e-10) << p << "/" << q << " n=" << n;
    }
  }
}

TEST(Rational, HQuadraticPerResidue) {
  tg::Rng r(29);
  for (auto [p, q] : {std::pair{1, 2}, {1, 3}, {2, 5}, {3, 7}}) {
    SkewSystem sys = rational_system(p, q, r);
    long double t = tg::uniform(r, 0, 1);
    long double a = static_cast<long double>(p) / q;
    auto coeffs = rational_H_coeffs(sys, t);
    ASSERT_EQ(coeffs.size(), static_cast<std::size_t>(q));
    for (long long b = 0; b < q; ++b) {
      long long n0 = b == 0 ? q : b;
      cplx h0 = oracle::H_direct(sys.phi(), sys.eta(), a, n0, t);
      cplx h1 = oracle::H_direct(sys.phi(), sys.eta(), a, n0 + q, t);
      cplx h2 = oracle::H_direct(sys.phi(), sys.eta(), a, n0 + 2 * q, t);
      cplx h3 = oracle::H_direct(sys.phi(), sys.eta(), a, n0 + 3 * q, t);
      // constant second difference along the residue class
      EXPECT_LT(cdist(h2 - 2.0 * h1 + h0, h3 - 2.0 * h2 + h1), 1e-9);
      for (long long n : {n0, n0 + q, n0 + 5 * q}) {
        cplx ref = oracle::H_direct(sys.phi(), sys.eta(), a, n, t);
        EXPECT_LT(cdist(rational_H(sys, t, n), ref), 1e-9 * (1 + std::abs(ref)));
        const QuadCoeffs& c = coeffs[static_cast<std::size_t>(n % q)];
        double nd = static_cast<double>(n);
        EXPECT_LT(cdist(c.A2 * nd * nd + c.A1 * nd + c.A0, ref), 1e-9 * (1 + std::abs(ref)));
      }
    }
  }
}

TEST(Rational, HalfFit) {
  // alpha = 1/2, phi = eta = cos: phi(t + r/2) = (-1)^r cos(2 pi t), so each
  // term is (-1)^(r+j) cos^2 and the inner sum over r < j is 1 or 0.
  PeriodicFn c = PeriodicFn::cos_mode(1);
  SkewSystem sys = SkewSystem::make(expand_cf(AlphaSpec::from_rational(1, 2), 10), c, c, PeriodicFn());
  long double t = 0.1L;
  double c2 = std::pow(std::cos(2 * std::numbers::pi * 0.1), 2);
  for (long long n = 1; n < 30; ++n) {
    // sum_{j=1}^{n-1} (-1)^j * [j odd] = -(number of odd j < n)
    double want = -static_cast<double>(n / 2) * c2;
    EXPECT_NEAR(rational_H(sys, t, n).real(), want, 1e-12) << n;
  }
}

TEST(Conjugacy, T1IsConjugatedStep) {
  tg::Rng r(30);
  for (int i = 0; i < 20; ++i) {
    SkewSystem sys = tg::random_system(r);
    PhasePoint p = tg::phase_point(r);
    PhasePoint a = conjugated_step_T1(sys, p);
    PhasePoint b = conj_R_inv(sys, step(sys, conj_R(sys, p)));
    PhasePoint c = step(sys.conjugated(), p);
    EXPECT_LT(dist_phase(a, b), 1e-9);
    EXPECT_LT(dist_phase(a, c), 1e-9);
    EXPECT_LT(dist_phase(conj_R_inv(sys, conj_R(sys, p)), p), 1e-12);
    long long m = tg::integer(r, 0, 200);
    EXPECT_LT(dist_phase(iterate_T1(sys, p, m), conj_R_inv(sys, iterate(sys, conj_R(sys, p), m))), 1e-8);
  }
}

TEST(Conjugacy, OmegaReconstruction) {
  tg::Rng r(31);
  for (int i = 0; i < 10; ++i) {
    SkewSystem sys = tg::random_system(r);
    EXPECT_LT(sys.omega_check_error(), 1e-10);
  }
}

TEST(Conjugacy, TildeT1InFiniteRegime) {
  SkewSystem sys = tg::cos_system(AlphaSpec::golden());
  ASSERT_TRUE(sys.finite_QB_regime());
  tg::Rng r(32);
  for (int i = 0; i < 50; ++i) {
    PhasePoint p = tg::phase_point(r);
    EXPECT_LT(dist_phase(tilde_T1_step(sys, p), conjugated_step_T1(sys, p)), 1e-10);
    long long m = tg::integer(r, 0, 1000);
    EXPECT_LT(dist_phase(tilde_T1_iterate(sys, p, m), iterate_T1(sys, p, m)), 1e-8);
  }
}

TEST(Oscillation, GoldenIsExploratory) {
  SkewSystem sys = tg::cos_system(AlphaSpec::golden());
  OscillationReport a = oscillation_constants(sys, 5, 200, 9);
  OscillationReport b = oscillation_constants(sys, 5, 200, 9);
  EXPECT_TRUE(a.exploratory);
  EXPECT_EQ(a.q_k, 8u);
  EXPECT_EQ(a.samples, 200);
  EXPECT_GE(a.C_H, 0);
  EXPECT_GE(a.C_xi, 0);
  EXPECT_EQ(a.C_H, b.C_H);
  EXPECT_EQ(a.C_xi, b.C_xi);
}
