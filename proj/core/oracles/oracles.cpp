#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nilflow/errors.hpp"

namespace nilflow::oracle {

namespace {
HP hp_of(const BigInt& v) { return HP(v); }
}  // namespace

HP alpha_hp(const AlphaSpec& spec, int depth) {
  switch (spec.kind) {
    case AlphaKind::Rational: {
      HP v = hp_of(spec.rational.p) / hp_of(spec.rational.q);
      return v - floor(v);
    }
    case AlphaKind::Surd: {
      const auto& s = spec.surd;
      HP v = (hp_of(s.a) + hp_of(s.b) * sqrt(hp_of(s.d))) / hp_of(s.c);
      return v - floor(v);
    }
    case AlphaKind::Stream: {
      std::vector<BigInt> a;
      if (spec.generator) {
        for (int k = 1; k <= depth; ++k) a.push_back(spec.generator->a(static_cast<std::size_t>(k)));
      } else {
        a = spec.list.prefix;
        if (!spec.list.repeat.empty())
          while (static_cast<int>(a.size()) < depth)
            for (const auto& r : spec.list.repeat) a.push_back(r);
      }
      HP v = 0;
      for (auto it = a.rbegin(); it != a.rend(); ++it) v = 1 / (hp_of(*it) + v);
      return v;
    }
  }
  throw InputError("alpha_hp: unknown kind");
}

std::vector<BigInt> cf_quotients(const HP& x, int count) {
  std::vector<BigInt> out;
  HP r = x - floor(x);
  for (int k = 0; k < count && r != 0; ++k) {
    r = 1 / r;
    HP f = floor(r);
    out.push_back(f.convert_to<BigInt>());
    r -= f;
  }
  return out;
}

std::vector<BigInt> euclid_cf(BigInt p, BigInt q) {
  if (q <= 0) throw InputError("euclid_cf: q must be positive");
  std::vector<BigInt> out;
  BigInt r = p % q;
  if (r < 0) r += q;
  BigInt a = q, b = r;  // continued fraction of r/q
  while (b != 0) {
    out.push_back(a / b);
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return out;
}

std::vector<BigInt> denominators(const std::vector<BigInt>& a) {
  std::vector<BigInt> q{1};
  BigInt prev = 0;
  for (const auto& ak : a) {
    BigInt next = ak * q.back() + prev;
    prev = q.back();
    q.push_back(next);
  }
  return q;
}

BigInt fibonacci(int k) {
  BigInt a = 0, b = 1;
  for (int i = 0; i < k; ++i) {
    BigInt t = a + b;
    a = b;
    b = t;
  }
  return a;
}

HP dist_hp(const HP& x, const BigInt& q) {
  HP v = x * hp_of(q);
  HP f = v - floor(v);
  return f < HP(0.5) ? f : 1 - f;
}

bool best_approx_exhaustive(const HP& x, std::uint64_t qk, std::uint64_t q_next) {
  const HP ref = dist_hp(x, BigInt(qk));
  // double is plenty to reject most q quickly; ties go to the exact check
  const double xd = x.convert_to<double>();
  const double refd = ref.convert_to<double>();
  for (std::uint64_t q = 1; q < q_next; ++q) {
    if (q == qk) continue;
    double v = std::fmod(static_cast<double>(q) * xd, 1.0);
    double d = std::min(v, 1 - v);
    if (d > refd * (1 + 1e-6) + 1e-12) continue;
    if (dist_hp(x, BigInt(q)) <= ref) return false;
  }
  return true;
}

int mobius_trial(std::uint64_t n) {
  if (n == 0) throw InputError("mobius_trial: n must be >= 1");
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

long long mertens_trial(std::uint64_t N) {
  long long s = 0;
  for (std::uint64_t n = 1; n <= N; ++n) s += mobius_trial(n);
  return s;
}

namespace {
cplx e_ld(long double x) {
  long double ang = 2 * std::numbers::pi_v<long double> * (x - std::floor(x));
  return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}
}  // namespace

cplx double_sum(long double alpha, long long u, long long v, long long n) {
  std::complex<long double> s{0, 0};
  for (long long j = 1; j < n; ++j)
    for (long long r = 0; r < j; ++r) {
      cplx e = e_ld(static_cast<long double>(u * r + v * j) * alpha);
      s += std::complex<long double>(e.real(), e.imag());
    }
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

cplx birkhoff_direct(const PeriodicFn& h, long double alpha, long long n, long double t) {
  std::complex<long double> s{0, 0};
  for (long long r = 0; r < n; ++r) {
    long double x = t + static_cast<long double>(r) * alpha;
    cplx v = h.eval(x - std::floor(x));
    s += std::complex<long double>(v.real(), v.imag());
  }
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

cplx H_direct(const PeriodicFn& phi, const PeriodicFn& eta, long double alpha, long long n, long double t) {
  std::complex<long double> s{0, 0}, inner{0, 0};
  for (long long j = 0; j < n; ++j) {
    long double x = t + static_cast<long double>(j) * alpha;
    x -= std::floor(x);
    if (j >= 1) {
      cplx e = eta.eval(x);
      s += inner * std::complex<long double>(e.real(), e.imag());
    }
    cplx p = phi.eval(x);
    inner += std::complex<long double>(p.real(), p.imag());
  }
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

PhasePoint repeated_steps(const SkewSystem& sys, PhasePoint p, long long n) {
  for (long long i = 0; i < n; ++i) p = step(sys, p);
  return p;
}

double midpoint_mean(const std::function<double(double)>& f, int M) {
  long double s = 0;
  for (int i = 0; i < M; ++i) s += f((i + 0.5) / M);
  return static_cast<double>(s / M);
}

double dist_nil_exhaustive(const NilPoint& p, const NilPoint& q, int W) {
  const HeisElt a = p.rep(), b = q.rep();
  const HeisElt ai = inv(a);
  double best = std::numeric_limits<double>::infinity();
  for (int m1 = -W; m1 <= W; ++m1)
    for (int m2 = -W; m2 <= W; ++m2)
      for (int m3 = -W; m3 <= W; ++m3) {
        HeisElt g{static_cast<double>(m1), static_cast<double>(m2), static_cast<double>(m3)};
        HeisElt D = mul(mul(ai, g), b);
        double z1 = std::fabs(D.z - D.x * D.y), z2 = std::fabs(D.z);
        double r = std::max({std::fabs(D.x), std::fabs(D.y), std::min(z1, z2)});
        best = std::min(best, r);
      }
  return best;
}

}  // namespace nilflow::oracle
