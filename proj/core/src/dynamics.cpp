#include "nilflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "nilflow/errors.hpp"

namespace nilflow {

// ---- SkewSystem -------------------------------------------------------------

struct SkewSystem::Derived {
  std::once_flag once;
  std::optional<ResonantSplit> sp, se, so;
  PeriodicFn omega;
  std::shared_ptr<SkewSystem> conj;
  double omega_err = 0;
  std::string error;
  bool error_is_numeric = false;
};

SkewSystem SkewSystem::make(RotationNumber alpha, PeriodicFn phi, PeriodicFn eta, PeriodicFn psi,
                            double B, double theta, int depth) {
  require_zero_mean(phi, "phi");
  require_zero_mean(eta, "eta");
  SkewSystem s;
  s.alpha_ = std::make_shared<const RotationNumber>(std::move(alpha));
  s.phi_ = std::move(phi);
  s.eta_ = std::move(eta);
  s.psi_ = std::move(psi);
  s.B_ = B;
  s.theta_ = theta;
  int d = depth < 0 ? s.alpha_->depth() : std::min(depth, s.alpha_->depth());
  s.sets_ = classify_index_sets(*s.alpha_, theta, B, d);
  s.derived_ = std::make_shared<Derived>();
  return s;
}

long long SkewSystem::K() const {
  return std::max({phi_.max_freq(), eta_.max_freq(), psi_.max_freq()});
}

namespace {

void build_derived(const SkewSystem& sys, const IndexSets& sets, const RotationNumber& alpha,
                   SkewSystem::Derived& d);

}  // namespace

const SkewSystem::Derived& SkewSystem::derived() const {
  auto& d = const_cast<Derived&>(*derived_);
  std::call_once(d.once, [&]() { build_derived(*this, sets_, *alpha_, d); });
  if (!d.error.empty()) {
    if (d.error_is_numeric) throw NumericError(d.error);
    throw InputError(d.error);
  }
  return d;
}

const ResonantSplit& SkewSystem::split_phi() const { return *derived().sp; }
const ResonantSplit& SkewSystem::split_eta() const { return *derived().se; }
const PeriodicFn& SkewSystem::omega() const { return derived().omega; }
const ResonantSplit& SkewSystem::split_omega() const { return *derived().so; }
const SkewSystem& SkewSystem::conjugated() const { return *derived().conj; }
double SkewSystem::omega_check_error() const { return derived().omega_err; }

bool SkewSystem::finite_QB_regime() const {
  return split_phi().plus.modes().empty() && split_eta().plus.modes().empty() &&
         split_omega().plus.modes().empty();
}

namespace {

void build_derived(const SkewSystem& sys, const IndexSets& sets, const RotationNumber& alpha,
                   SkewSystem::Derived& d) {
  try {
    long long width = 2 * std::max({sys.phi().max_freq(), sys.eta().max_freq(), sys.psi().max_freq()});
    if (static_cast<std::uint64_t>(width) > sets.membership_limit())
      throw InputError("alpha window too short: M1/M2 membership needed up to |m| = " +
                       std::to_string(width) + ", expand alpha further");
    d.sp = split_resonant(sys.phi(), sets, alpha);
    d.se = split_resonant(sys.eta(), sets, alpha);
    const PeriodicFn& gphi = d.sp->cobound;
    const PeriodicFn& geta = d.se->cobound;
    const PeriodicFn geta_shift = geta.shifted(alpha);
    d.omega = sys.psi() + product(gphi, sys.eta()) - product(d.sp->plus, geta_shift);

    // The products are exact convolutions, so the pointwise identity should
    // hold to rounding. Anything larger means a broken spectrum.
    double scale = 1 + sys.psi().sup_bound() + gphi.sup_bound() * sys.eta().sup_bound() +
                   d.sp->plus.sup_bound() * geta.sup_bound();
    const double tol = 1e-9 * scale;
    const long double a = alpha.value_ld();
    for (int i = 0; i < 32; ++i) {
      long double t = (i + 0.318309886L) / 32.0L;
      cplx rec = sys.psi().eval(t) + gphi.eval(t) * sys.eta().eval(t) - d.sp->plus.eval(t) * geta.eval(t + a);
      d.omega_err = std::max(d.omega_err, std::abs(d.omega.eval(t) - rec));
    }
    if (d.omega_err > tol) throw TruncationError("omega reconstruction exceeds tolerance", tol);

    d.so = split_resonant(d.omega, sets, alpha);
    RotationNumber rn = alpha;
    d.conj = std::make_shared<SkewSystem>(SkewSystem::make(
        std::move(rn), d.sp->plus, d.se->plus, d.so->plus, sys.B(), sys.theta(), sets.window));
  } catch (const NumericError& e) {
    d.error = e.what();
    d.error_is_numeric = true;
  } catch (const std::exception& e) {
    d.error = e.what();
  }
}

void require_real(const SkewSystem& sys) {
  if (!sys.is_real()) throw InputError("the skew product needs real-valued phi, eta, psi");
}

double wrap_shift(double t, long double shift) {
  long double v = static_cast<long double>(t) + shift;
  v -= std::floor(v);
  double r = static_cast<double>(v);
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace

// ---- step / iterate ---------------------------------------------------------

PhasePoint step(const SkewSystem& sys, const PhasePoint& p) {
  require_real(sys);
  const long double t = p.t;
  HeisElt M{sys.eta().eval_re(t), sys.phi().eval_re(t), sys.psi().eval_re(t)};
  return {wrap_shift(p.t, sys.alpha().frac_mul(static_cast<i128>(1))), p.p.right_mul(M)};
}

HeisElt iterate_matrix(const SkewSystem& sys, long double t, long long n) {
  if (n < 0) throw InputError("iterate: n must be >= 0");
  if (n == 0) return HeisElt::identity();
  const RotationNumber& a = sys.alpha();
  if (a.is_rational()) {
    cplx Phi = rational_birkhoff(sys.phi(), a, n, t);
    cplx xi = rational_birkhoff(sys.eta(), a, n, t);
    cplx Om = rational_birkhoff(sys.psi(), a, n, t);
    cplx H = rational_H(sys, t, n);
    return {xi.real(), Phi.real(), (Om + H).real()};
  }
  BirkhoffSums bs = birkhoff(sys, n);
  return {bs.xi.eval(t).real(), bs.Phi.eval(t).real(), bs.Psi(t).real()};
}

PhasePoint iterate(const SkewSystem& sys, const PhasePoint& p, long long n) {
  require_real(sys);
  if (n < 0) throw InputError("iterate: n must be >= 0");
  if (n == 0) return p;
  HeisElt Y = iterate_matrix(sys, p.t, n);
  return {wrap_shift(p.t, sys.alpha().frac_mul(static_cast<i128>(n))), p.p.right_mul(Y)};
}

// ---- exponential sums -------------------------------------------------------

namespace {

cplx G(const RotationNumber& a, long long m, long long n) { return geom_sum(a, m, n); }

cplx outer_divisor(const RotationNumber& a, long long m, const char* what) {
  if (a.is_integer_mul(m)) throw SmallDivisorError(std::string(what) + ": e(m alpha) = 1", m);
  cplx d = one_minus_e(a.frac_mul(static_cast<i128>(m)));
  if (std::abs(d) < kSmallDivisor) throw SmallDivisorError(std::string(what) + ": small divisor", m);
  return d;
}

}  // namespace

cplx expsum_w0(const RotationNumber& alpha, long long u, long long n) {
  cplx den = outer_divisor(alpha, u, "expsum_w0");
  if (n <= 1) return {0, 0};
  return (G(alpha, -u, n) - static_cast<double>(n)) / den;
}

cplx expsum_w1(const RotationNumber& alpha, long long u, long long v, long long n) {
  cplx den = outer_divisor(alpha, u, "expsum_w1");
  if (n <= 1) return {0, 0};
  return (G(alpha, v, n) - G(alpha, u + v, n)) / den;
}

cplx expsum_w2(const RotationNumber& alpha, long long u, long long v, long long n) {
  cplx den = outer_divisor(alpha, v, "expsum_w2");
  if (n <= 1) return {0, 0};
  cplx ev = e_frac(alpha.frac_mul(static_cast<i128>(v)));
  cplx env = e_frac(alpha.frac_mul(static_cast<i128>(v) * n));
  return (G(alpha, u + v, n) * ev - G(alpha, u, n) * env) / den;
}

cplx expsum_w1w2(const RotationNumber& alpha, long long u, long long v, long long n) {
  if (u + v == 0) throw InputError("expsum_w1w2: u + v = 0 belongs to expsum_w0");
  if (u == 0 || v == 0) throw InputError("expsum_w1w2: u and v must be nonzero");
  if (alpha.dist_mul(u) >= alpha.dist_mul(v)) return expsum_w1(alpha, u, v, n);
  return expsum_w2(alpha, u, v, n);
}

cplx double_exp_sum(const RotationNumber& alpha, long long u, long long v, long long n) {
  if (n <= 1) return {0, 0};
  const bool ru = alpha.is_integer_mul(u), rv = alpha.is_integer_mul(v);
  const double tri = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  if (u + v == 0) return ru ? cplx{tri, 0} : expsum_w0(alpha, u, n);
  if (!ru && !rv) return expsum_w1w2(alpha, u, v, n);
  if (!ru) return expsum_w1(alpha, u, v, n);
  if (rv) return {tri, 0};
  // inner sum is j: sum_{j=1}^{n-1} j b^j with b = e(v alpha)
  cplx b = e_frac(alpha.frac_mul(static_cast<i128>(v)));
  cplx bn = e_frac(alpha.frac_mul(static_cast<i128>(v) * n));
  cplx bn1 = e_frac(alpha.frac_mul(static_cast<i128>(v) * (n - 1)));
  cplx omb = one_minus_e(alpha.frac_mul(static_cast<i128>(v)));
  return b * (1.0 - static_cast<double>(n) * bn1 + static_cast<double>(n - 1) * bn) / (omb * omb);
}

BirkhoffSums birkhoff(const SkewSystem& sys, long long n) {
  if (n < 0) throw InputError("birkhoff: n must be >= 0");
  const RotationNumber& a = sys.alpha();
  BirkhoffSums bs;
  bs.n = n;
  auto sums = [&](const PeriodicFn& f) {
    std::vector<Mode> out;
    for (const auto& md : f.modes()) {
      try {
        out.push_back({md.m, md.c * G(a, md.m, n)});
      } catch (const SmallDivisorError& e) {
        throw SmallDivisorError(std::string("birkhoff: ") + e.what(), md.m);
      }
    }
    return PeriodicFn::make(std::move(out), f.mean() * static_cast<double>(n));
  };
  bs.Phi = sums(sys.phi());
  bs.xi = sums(sys.eta());
  bs.Omega = sums(sys.psi());
  std::vector<Mode> h;
  for (const auto& pu : sys.phi().modes())
    for (const auto& ev : sys.eta().modes()) {
      cplx w;
      try {
        w = double_exp_sum(a, pu.m, ev.m, n);
      } catch (const SmallDivisorError& e) {
        throw SmallDivisorError(std::string("birkhoff H: ") + e.what(), pu.m);
      }
      h.push_back({pu.m + ev.m, pu.c * ev.c * w});
    }
  bs.H = PeriodicFn::make(std::move(h));
  bs.Sigma_n0 = bs.H.mean();
  bs.Sigma = bs.H.without_mean();
  return bs;
}

// ---- rational alpha -----------------------------------------------------------

namespace {

struct RationalOrbit {
  long long p, q;
  long double at(long double t, long long r) const {
    long long k = static_cast<long long>((static_cast<i128>(r % q) * p) % q);
    return t + static_cast<long double>(k) / static_cast<long double>(q);
  }
};

RationalOrbit rational_orbit(const RotationNumber& alpha) {
  if (!alpha.is_rational()) throw InputError("rational path needs rational alpha");
  if (alpha.den() > BigInt(100'000'000)) throw CapacityError("rational path: denominator too large");
  return {static_cast<long long>(alpha.num()), static_cast<long long>(alpha.den())};
}

}  // namespace

cplx rational_birkhoff(const PeriodicFn& h, const RotationNumber& alpha, long long n, long double t) {
  if (n < 0) throw InputError("rational_birkhoff: n must be >= 0");
  const RationalOrbit o = rational_orbit(alpha);
  const long long b = n % o.q;
  cplx Cq{0, 0}, Cb{0, 0};
  for (long long r = 0; r < o.q; ++r) {
    cplx v = h.eval(o.at(t, r));
    Cq += v;
    if (r < b) Cb += v;
  }
  return Cq * (static_cast<double>(n - b) / static_cast<double>(o.q)) + Cb;
}

std::vector<QuadCoeffs> rational_H_coeffs(const SkewSystem& sys, long double t) {
  const RationalOrbit o = rational_orbit(sys.alpha());
  const long long q = o.q;
  std::vector<cplx> eta(static_cast<std::size_t>(q) + 1), Cphi(static_cast<std::size_t>(q) + 1);
  Cphi[0] = 0;
  for (long long r = 0; r < q; ++r) {
    cplx ph = sys.phi().eval(o.at(t, r));
    eta[r] = sys.eta().eval(o.at(t, r));
    Cphi[r + 1] = Cphi[r] + ph;
  }
  eta[q] = eta[0];
  // S = sum_{j=1}^{q-1} eta(t + j alpha) C_phi(j, t), prefix form for R_b
  std::vector<cplx> R(static_cast<std::size_t>(q) + 1, cplx{0, 0});  // R[b] = sum_{j=1}^{b-1}
  for (long long b = 2; b <= q; ++b) R[b] = R[b - 1] + eta[b - 1] * Cphi[b - 1];
  const cplx S = R[q];
  cplx Ceta_q{0, 0};  // C_eta(q, t + alpha) = sum_{j=1}^{q} eta(t + j alpha)
  for (long long j = 1; j <= q; ++j) Ceta_q += eta[j];
  const cplx P = Ceta_q * Cphi[q];
  const double q2 = static_cast<double>(q) * static_cast<double>(q);
  std::vector<QuadCoeffs> out;
  cplx Ceta_b{0, 0};
  for (long long b = 0; b < q; ++b) {
    if (b > 0) Ceta_b += eta[b - 1];
    const cplx L = (S + Ceta_b * Cphi[q]) / static_cast<double>(q);
    const double bd = static_cast<double>(b), qd = static_cast<double>(q);
    QuadCoeffs c;
    c.b = b;
    c.A2 = P / (2 * q2);
    c.A1 = -P * (qd + 2 * bd) / (2 * q2) + L;
    c.A0 = P * ((qd + bd) * bd) / (2 * q2) - L * bd + (b >= 1 ? R[b] : cplx{0, 0});
    out.push_back(c);
  }
  return out;
}

cplx rational_H(const SkewSystem& sys, long double t, long long n) {
  const auto coeffs = rational_H_coeffs(sys, t);
  const auto q = static_cast<long long>(coeffs.size());
  const QuadCoeffs& c = coeffs[static_cast<std::size_t>(n % q)];
  const double nd = static_cast<double>(n);
  return c.A2 * nd * nd + c.A1 * nd + c.A0;
}

// ---- conjugation ----------------------------------------------------------------

namespace {
HeisElt R_element(const SkewSystem& sys, long double t) {
  return {sys.g_eta().eval_re(t), sys.g_phi().eval_re(t), sys.c().eval_re(t)};
}
}  // namespace

PhasePoint conj_R(const SkewSystem& sys, const PhasePoint& p) {
  require_real(sys);
  return {p.t, p.p.right_mul(R_element(sys, p.t))};
}

PhasePoint conj_R_inv(const SkewSystem& sys, const PhasePoint& p) {
  require_real(sys);
  return {p.t, p.p.right_mul(inv(R_element(sys, p.t)))};
}

PhasePoint conjugated_step_T1(const SkewSystem& sys, const PhasePoint& p) {
  return step(sys.conjugated(), p);
}

PhasePoint iterate_T1(const SkewSystem& sys, const PhasePoint& p, long long m) {
  return iterate(sys.conjugated(), p, m);
}

PhasePoint tilde_T1_step(const SkewSystem& sys, const PhasePoint& p) { return tilde_T1_iterate(sys, p, 1); }

PhasePoint tilde_T1_iterate(const SkewSystem& sys, const PhasePoint& p, long long m) {
  if (!sys.finite_QB_regime()) throw InputError("tilde T1 needs the finite-Q_B regime (M1 = {0} on the spectra)");
  if (m < 0) throw InputError("tilde_T1_iterate: m must be >= 0");
  const long double w0 = sys.omega().mean().real();
  const long double shift = signed_frac(static_cast<long double>(m) * w0);
  return {wrap_shift(p.t, sys.alpha().frac_mul(static_cast<i128>(m))),
          p.p.right_mul(HeisElt::central(static_cast<double>(shift)))};
}

}  // namespace nilflow
