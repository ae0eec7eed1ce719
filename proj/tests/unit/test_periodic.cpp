#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "nilflow/errors.hpp"
#include "nilflow/periodic.hpp"

using namespace nilflow;
namespace tg = nilflow::testgen;

namespace {
constexpr double kPi = std::numbers::pi;

// alpha = [0; 2, 100, 1, 1, ...]: q_1 = 2 and q_2 = 201, so q_1 is resonant
// for B = 3 and the even frequencies below 201 land in M1.
RotationNumber resonant_alpha() { return expand_cf(AlphaSpec::from_quotients({2, 100}, {1}), 12); }
}  // namespace

TEST(Periodic, EvalExamples) {
  EXPECT_NEAR(PeriodicFn::cos_mode(1).eval_re(0), 1, 1e-15);
  EXPECT_NEAR(PeriodicFn::cos_mode(1).eval_re(0.25), 0, 1e-15);
  EXPECT_NEAR(PeriodicFn::sin_mode(1).eval_re(0.25), 1, 1e-15);
  EXPECT_NEAR(PeriodicFn::cos_mode(3, 2.0).eval_re(1.0L / 3), 2, 1e-14);
  cplx v = PeriodicFn::exp_mode(2).eval(0.125L);
  EXPECT_NEAR(v.real(), 0, 1e-15);
  EXPECT_NEAR(v.imag(), 1, 1e-15);
  EXPECT_EQ(PeriodicFn::constant({2, -1}).eval(0.37L), cplx(2, -1));
  EXPECT_TRUE(PeriodicFn().is_zero());
}

TEST(Periodic, PeriodOne) {
  tg::Rng r(11);
  for (int i = 0; i < 200; ++i) {
    PeriodicFn f = tg::real_trig(r, 6, 1.0, tg::uniform(r, -1, 1));
    long double t = tg::uniform(r, 0, 1);
    cplx a = f.eval(t), b = f.eval(t + 1), c = f.eval(t - 3);
    EXPECT_NEAR(std::abs(a - b), 0, 1e-13);
    EXPECT_NEAR(std::abs(a - c), 0, 1e-13);
    EXPECT_NEAR(a.imag(), 0, 1e-14);
    EXPECT_LE(std::abs(a), f.sup_bound() + 1e-14);
  }
}

TEST(Periodic, MakeRejectsBadInput) {
  EXPECT_THROW(PeriodicFn::make({{1, {1, 0}}}, 0, DecayClass{2.0, 0.5}), InputError);
  EXPECT_NO_THROW(PeriodicFn::make({{2, {1, 0}}}, 0, DecayClass{2.0, 4.0}));
  EXPECT_THROW(PeriodicFn::make({{1, {1, 0}}, {-1, {0, 1}}}, 0, std::nullopt, true), InputError);
  EXPECT_THROW(PeriodicFn::make({{1, {1, 0}}}, 0, std::nullopt, true), InputError);
  EXPECT_THROW(PeriodicFn::make({{1, {0.5, 0}}, {-1, {0.5, 0}}}, {0, 1}, std::nullopt, true), InputError);
}

TEST(Periodic, CertificateConstant) {
  PeriodicFn f = PeriodicFn::make({{2, {1, 0}}, {-4, {0, 0.5}}}, 0);
  // max(1 * 2^2, 0.5 * 4^2)
  EXPECT_NEAR(f.certificate_constant(2.0), 8.0, 1e-12);
  EXPECT_EQ(PeriodicFn::constant(3).certificate_constant(5.0), 0);
}

TEST(Periodic, ParsevalAndProduct) {
  PeriodicFn c = PeriodicFn::cos_mode(1);
  EXPECT_NEAR(c.l2_norm2(), 0.5, 1e-15);
  PeriodicFn c2 = product(c, c);
  EXPECT_NEAR(c2.mean().real(), 0.5, 1e-15);
  EXPECT_NEAR(c2.coeff(2).real(), 0.25, 1e-15);
  EXPECT_EQ(c2.coeff(1), cplx(0, 0));
  tg::Rng r(12);
  for (int i = 0; i < 100; ++i) {
    PeriodicFn f = tg::real_trig(r, 4), g = tg::real_trig(r, 4, 1.0, 0.3);
    PeriodicFn fg = product(f, g);
    long double t = tg::uniform(r, 0, 1);
    EXPECT_NEAR(std::abs(fg.eval(t) - f.eval(t) * g.eval(t)), 0, 1e-13);
    EXPECT_NEAR(std::abs((f + g).eval(t) - f.eval(t) - g.eval(t)), 0, 1e-14);
    EXPECT_NEAR(std::abs((f - g).eval(t) - f.eval(t) + g.eval(t)), 0, 1e-14);
  }
}

TEST(Periodic, ShiftedAndMean) {
  RotationNumber a = expand_cf(AlphaSpec::golden(), 25);
  tg::Rng r(13);
  PeriodicFn f = tg::real_trig(r, 5, 1.0, 0.7);
  PeriodicFn fs = f.shifted(a);
  for (long double t : {0.0L, 0.1L, 0.55L, 0.9L})
    EXPECT_NEAR(std::abs(fs.eval(t) - f.eval(t + a.value_ld())), 0, 1e-13);
  EXPECT_THROW(require_zero_mean(f, "f"), InputError);
  EXPECT_NO_THROW(require_zero_mean(f.without_mean(), "f"));
}

TEST(Split, GoldenHasNoResonantPart) {
  RotationNumber a = expand_cf(AlphaSpec::golden(), 25);
  IndexSets sets = classify_index_sets(a, 0.001, 3.0, 25);
  PeriodicFn f = PeriodicFn::cos_mode(1) + PeriodicFn::constant(0.25);
  ResonantSplit s = split_resonant(f, sets, a);
  EXPECT_TRUE(s.plus.modes().empty());
  EXPECT_EQ(s.plus.mean(), cplx(0.25, 0));
  EXPECT_EQ(s.minus.modes().size(), 2u);
  // g-hat(1) = (1/2) / (e(alpha) - 1)
  cplx e1 = std::polar(1.0, 2 * kPi * a.value());
  cplx want = 0.5 / (e1 - 1.0);
  EXPECT_NEAR(std::abs(s.cobound.coeff(1) - want), 0, 1e-14);
  EXPECT_TRUE(s.cobound.is_real());
}

TEST(Split, ConstantFunction) {
  RotationNumber a = expand_cf(AlphaSpec::silver(), 25);
  IndexSets sets = classify_index_sets(a, 0.001, 3.0, 25);
  ResonantSplit s = split_resonant(PeriodicFn::constant(-1.5), sets, a);
  EXPECT_TRUE(s.minus.is_zero());
  EXPECT_TRUE(s.cobound.is_zero());
  EXPECT_EQ(s.plus.mean(), cplx(-1.5, 0));
}

TEST(Split, ResonantFrequenciesStayInPlus) {
  RotationNumber a = resonant_alpha();
  ASSERT_EQ(a.q_u64(1), 2u);
  ASSERT_EQ(a.q_u64(2), 201u);
  IndexSets sets = classify_index_sets(a, 0.001, 3.0, 12);
  PeriodicFn f = PeriodicFn::cos_mode(1) + PeriodicFn::cos_mode(2, 0.5) + PeriodicFn::sin_mode(3, 0.25);
  ResonantSplit s = split_resonant(f, sets, a);
  ASSERT_EQ(s.plus.modes().size(), 2u);
  EXPECT_EQ(s.plus.modes()[0].m, -2);
  EXPECT_EQ(s.plus.modes()[1].m, 2);
  EXPECT_EQ(s.minus.modes().size(), 4u);
}

TEST(Split, CoboundaryIdentityRandom) {
  tg::Rng r(14);
  double worst = 0;
  for (int sys = 0; sys < 10; ++sys) {
    RotationNumber a = expand_cf(tg::irrational(r), 25);
    IndexSets sets = classify_index_sets(a, 0.001, 3.0, 25);
    PeriodicFn f = tg::real_trig(r, 8, 1.0, 0.2);
    ResonantSplit s = split_resonant(f, sets, a);
    for (int i = 0; i < 100; ++i) {
      long double t = tg::uniform(r, 0, 1);
      cplx lhs = s.cobound.eval(t + a.value_ld()) - s.cobound.eval(t);
      worst = std::max(worst, std::abs(lhs - s.minus.eval(t)));
      worst = std::max(worst, std::abs(s.plus.eval(t) + s.minus.eval(t) - f.eval(t)));
    }
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Split, RationalAlphaRefusesExactResonance) {
  RotationNumber a = expand_cf(AlphaSpec::from_rational(1, 3), 10);
  IndexSets sets = classify_index_sets(a, 0.001, 3.0, a.depth());
  EXPECT_THROW(classify_index_sets(a, 0.001, 3.0, a.depth() + 1), RangeError);
  // m = 3 lies in M1 (open-ended resonance at q = 3) so nothing is divided.
  EXPECT_NO_THROW(split_resonant(PeriodicFn::cos_mode(3), sets, a));
  EXPECT_NO_THROW(split_resonant(PeriodicFn::cos_mode(1), sets, a));
}

TEST(AvgDefect, Constant) {
  RotationNumber a = expand_cf(AlphaSpec::golden(), 25);
  AvgDefect d = birkhoff_avg_defect(PeriodicFn::constant(2.0), a, 8);
  EXPECT_NEAR(d.defect, 0.25, 1e-15);
  EXPECT_NEAR(d.comparison, std::pow(8.0, -3.0), 1e-18);
  EXPECT_THROW(birkhoff_avg_defect(PeriodicFn::constant(1), a, 0), InputError);
}

TEST(AvgDefect, SingleCharacterClosedForm) {
  RotationNumber a = expand_cf(AlphaSpec::golden(), 25);
  for (long long q : {1LL, 2LL, 5LL, 13LL, 89LL}) {
    AvgDefect d = birkhoff_avg_defect(PeriodicFn::exp_mode(1), a, q);
    double want = std::abs(std::sin(kPi * (q + 1) * a.value()) / std::sin(kPi * a.value())) / q;
    EXPECT_NEAR(d.defect, want, 1e-12) << q;
  }
}

TEST(AvgDefect, ResonantFrequency) {
  RotationNumber a = expand_cf(AlphaSpec::from_rational(2, 7), 10);
  AvgDefect d = birkhoff_avg_defect(PeriodicFn::exp_mode(7), a, 7);
  EXPECT_NEAR(d.defect, 8.0 / 7.0, 1e-12);
}
