#include "nilflow/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "nilflow/errors.hpp"

namespace nilflow {

namespace {

struct Neumaier {
  double s = 0, c = 0;
  void add(double v) {
    double t = s + v;
    if (std::fabs(s) >= std::fabs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

std::vector<Mode> normalise(const std::map<long long, cplx>& acc) {
  std::vector<Mode> out;
  for (const auto& [m, c] : acc)
    if (m != 0 && c != cplx{0, 0}) out.push_back({m, c});
  return out;
}

}  // namespace

PeriodicFn PeriodicFn::make(std::vector<Mode> modes, cplx mean, std::optional<DecayClass> decay, bool real) {
  std::map<long long, cplx> acc;
  for (const auto& md : modes) {
    if (!std::isfinite(md.c.real()) || !std::isfinite(md.c.imag()))
      throw InputError("periodic: non-finite coefficient at m = " + std::to_string(md.m));
    if (md.m == 0) {
      mean += md.c;
      continue;
    }
    acc[md.m] += md.c;
  }
  PeriodicFn f;
  f.modes_ = normalise(acc);
  f.mean_ = mean;
  f.decay_ = decay;
  f.real_ = real;
  if (decay) {
    if (!(decay->r >= 0) || !(decay->C >= 0))
      throw InputError("periodic: decay class needs r >= 0 and C >= 0");
    for (const auto& md : f.modes_) {
      double lim = decay->C * std::pow(static_cast<double>(std::llabs(md.m)), -decay->r);
      if (std::abs(md.c) > lim * (1 + 1e-12))
        throw InputError("periodic: coefficient at m = " + std::to_string(md.m) +
                         " violates the declared decay class");
    }
  }
  if (real) {
    if (std::fabs(mean.imag()) > 1e-15 * std::max(1.0, std::abs(mean)))
      throw InputError("periodic: real function with a non-real mean");
    for (const auto& md : f.modes_) {
      cplx partner = f.coeff(-md.m);
      if (std::abs(partner - std::conj(md.c)) > 1e-15 * std::max(1.0, std::abs(md.c)))
        throw InputError("periodic: real function needs f-hat(-m) = conj(f-hat(m)) at m = " +
                         std::to_string(md.m));
    }
  }
  return f;
}

PeriodicFn PeriodicFn::constant(cplx c) { return make({}, c, std::nullopt, c.imag() == 0); }

PeriodicFn PeriodicFn::cos_mode(long long m, double amp) {
  if (m == 0) return constant(amp);
  return make({{m, amp / 2}, {-m, amp / 2}}, 0, std::nullopt, true);
}

PeriodicFn PeriodicFn::sin_mode(long long m, double amp) {
  if (m == 0) return constant(0);
  return make({{m, cplx(0, -amp / 2)}, {-m, cplx(0, amp / 2)}}, 0, std::nullopt, true);
}

PeriodicFn PeriodicFn::exp_mode(long long m, cplx amp) {
  return make({{m, amp}}, 0, std::nullopt, false);
}

cplx PeriodicFn::eval(long double t) const {
  long double tr = t - std::floor(t);
  Neumaier re, im;
  re.add(mean_.real());
  im.add(mean_.imag());
  for (const auto& md : modes_) {
    long double ph = static_cast<long double>(md.m) * tr;
    cplx e = e_frac(ph - std::floor(ph));
    cplx v = md.c * e;
    re.add(v.real());
    im.add(v.imag());
  }
  return {re.value(), real_ ? 0.0 : im.value()};
}

cplx PeriodicFn::coeff(long long m) const {
  if (m == 0) return mean_;
  auto it = std::lower_bound(modes_.begin(), modes_.end(), m,
                             [](const Mode& a, long long v) { return a.m < v; });
  if (it != modes_.end() && it->m == m) return it->c;
  return {0, 0};
}

long long PeriodicFn::max_freq() const noexcept {
  long long k = 0;
  for (const auto& md : modes_) k = std::max(k, std::llabs(md.m));
  return k;
}

double PeriodicFn::sup_bound() const {
  double s = std::abs(mean_);
  for (const auto& md : modes_) s += std::abs(md.c);
  return s;
}

double PeriodicFn::l2_norm2() const {
  double s = std::norm(mean_);
  for (const auto& md : modes_) s += std::norm(md.c);
  return s;
}

double PeriodicFn::certificate_constant(double r) const {
  double C = 0;
  for (const auto& md : modes_)
    C = std::max(C, std::abs(md.c) * std::pow(static_cast<double>(std::llabs(md.m)), r));
  return C;
}

PeriodicFn PeriodicFn::with_decay(std::optional<DecayClass> d) const {
  return make(modes_, mean_, d, real_);
}

PeriodicFn PeriodicFn::without_mean() const {
  PeriodicFn f = *this;
  f.mean_ = 0;
  return f;
}

PeriodicFn PeriodicFn::shifted(const RotationNumber& alpha) const {
  PeriodicFn f = *this;
  for (auto& md : f.modes_) md.c *= e_frac(alpha.frac_mul(static_cast<i128>(md.m)));
  return f;
}

namespace {
PeriodicFn combine(const PeriodicFn& f, const PeriodicFn& g, double sg) {
  std::map<long long, cplx> acc;
  for (const auto& md : f.modes()) acc[md.m] += md.c;
  for (const auto& md : g.modes()) acc[md.m] += sg * md.c;
  std::vector<Mode> modes;
  for (const auto& [m, c] : acc) modes.push_back({m, c});
  return PeriodicFn::make(std::move(modes), f.mean() + sg * g.mean(), std::nullopt,
                          f.is_real() && g.is_real());
}
}  // namespace

PeriodicFn operator+(const PeriodicFn& f, const PeriodicFn& g) { return combine(f, g, 1.0); }
PeriodicFn operator-(const PeriodicFn& f, const PeriodicFn& g) { return combine(f, g, -1.0); }

PeriodicFn operator*(cplx s, const PeriodicFn& f) {
  std::vector<Mode> modes = f.modes();
  for (auto& md : modes) md.c *= s;
  return PeriodicFn::make(std::move(modes), s * f.mean(), std::nullopt, f.is_real() && s.imag() == 0);
}

PeriodicFn product(const PeriodicFn& f, const PeriodicFn& g) {
  std::map<long long, cplx> acc;
  auto all = [](const PeriodicFn& h) {
    std::vector<Mode> v = h.modes();
    if (h.mean() != cplx{0, 0}) v.push_back({0, h.mean()});
    return v;
  };
  const auto fa = all(f), ga = all(g);
  for (const auto& a : fa)
    for (const auto& b : ga) acc[a.m + b.m] += a.c * b.c;
  cplx mean = acc.count(0) ? acc[0] : cplx{0, 0};
  acc.erase(0);
  std::vector<Mode> modes;
  for (const auto& [m, c] : acc) modes.push_back({m, c});
  // Rounding can break exact conjugate symmetry; the product of two real
  // functions is real, so symmetrise rather than re-validate.
  bool real = f.is_real() && g.is_real();
  if (real) {
    for (auto& md : modes)
      if (md.m > 0) {
        auto it = std::find_if(modes.begin(), modes.end(), [&](const Mode& o) { return o.m == -md.m; });
        if (it != modes.end()) {
          cplx avg = 0.5 * (md.c + std::conj(it->c));
          md.c = avg;
          it->c = std::conj(avg);
        }
      }
    mean = {mean.real(), 0.0};
  }
  return PeriodicFn::make(std::move(modes), mean, std::nullopt, real);
}

std::string PeriodicFn::describe() const {
  std::ostringstream os;
  os << "mean=" << mean_ << " modes={";
  bool first = true;
  for (const auto& md : modes_) {
    os << (first ? "" : ", ") << md.m << ":" << md.c;
    first = false;
  }
  os << "}";
  return os.str();
}

void require_zero_mean(const PeriodicFn& f, const std::string& what, double tol) {
  if (std::abs(f.mean()) > tol) throw InputError(what + " must have zero mean");
}

ResonantSplit split_resonant(const PeriodicFn& f, const IndexSets& sets, const RotationNumber& alpha) {
  std::vector<Mode> plus, minus, cob;
  for (const auto& md : f.modes()) {
    if (sets.in_M1(md.m)) {
      plus.push_back(md);
      continue;
    }
    minus.push_back(md);
    if (alpha.is_integer_mul(md.m))
      throw SmallDivisorError("split_resonant: e(m alpha) = 1 for m in M2", md.m);
    // e(m alpha) - 1 = -(1 - e(m alpha))
    cplx den = -one_minus_e(alpha.frac_mul(static_cast<i128>(md.m)));
    if (std::abs(den) < kSmallDivisor) throw SmallDivisorError("split_resonant: small divisor", md.m);
    cob.push_back({md.m, md.c / den});
  }
  ResonantSplit s;
  s.plus = PeriodicFn::make(plus, f.mean(), f.decay(), f.is_real());
  s.minus = PeriodicFn::make(minus, 0, f.decay(), f.is_real());
  // For real f the exact cobound is real; copy conj(g-hat(m)) onto -m so
  // rounding does not break the symmetry.
  if (f.is_real()) {
    std::map<long long, cplx> byfreq;
    for (const auto& md : cob) byfreq[md.m] = md.c;
    for (auto& md : cob)
      if (md.m < 0) md.c = std::conj(byfreq.at(-md.m));
  }
  s.cobound = PeriodicFn::make(cob, 0, std::nullopt, f.is_real());
  return s;
}

AvgDefect birkhoff_avg_defect(const PeriodicFn& f, const RotationNumber& alpha, long long q, double B,
                              int grid_points) {
  if (q < 1) throw InputError("birkhoff_avg_defect: q must be >= 1");
  if (grid_points < 1) throw InputError("birkhoff_avg_defect: grid must be nonempty");
  // (1/q) sum_{j=0}^{q} f(t + j alpha) - mean, per frequency a geometric sum
  std::vector<Mode> w;
  for (const auto& md : f.modes())
    w.push_back({md.m, md.c * geom_sum(alpha, md.m, q + 1) / static_cast<double>(q)});
  cplx const_part = f.mean() * (static_cast<double>(q + 1) / static_cast<double>(q)) - f.mean();
  PeriodicFn avg = PeriodicFn::make(w, const_part, std::nullopt, false);
  AvgDefect out;
  out.q = q;
  out.comparison = std::pow(static_cast<double>(q), -B);
  for (int i = 0; i < grid_points; ++i) {
    long double t = static_cast<long double>(i) / grid_points;
    double d = std::abs(avg.eval(t));
    if (d > out.defect) {
      out.defect = d;
      out.at_t = static_cast<double>(t);
    }
  }
  return out;
}

}  // namespace nilflow
