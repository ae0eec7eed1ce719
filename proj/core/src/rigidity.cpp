#include "nilflow/rigidity.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

#include "nilflow/errors.hpp"

namespace nilflow {

namespace {

// Fixed chunking keeps the reduction order independent of the thread count.
constexpr int kChunks = 64;

template <class F>
double grid_mean(int M, unsigned threads, F&& value_at) {
  std::vector<long double> part(kChunks, 0.0L);
  auto run_chunk = [&](int c) {
    int lo = static_cast<int>(static_cast<long long>(M) * c / kChunks);
    int hi = static_cast<int>(static_cast<long long>(M) * (c + 1) / kChunks);
    long double s = 0;
    for (int i = lo; i < hi; ++i) s += value_at(static_cast<long double>(i) / M);
    part[c] = s;
  };
  unsigned nt = std::max(1u, std::min<unsigned>(threads, kChunks));
  if (nt == 1) {
    for (int c = 0; c < kChunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nt; ++w)
      pool.emplace_back([&, w]() {
        for (int c = static_cast<int>(w); c < kChunks; c += static_cast<int>(nt)) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }
  long double s = 0;
  for (long double v : part) s += v;
  return static_cast<double>(s / M);
}

double wrapped_sq(cplx v) {
  double d = nearest_frac(v.real()).dist;
  return d * d;
}

struct WrappedResult {
  double value;
  int grid;
  bool converged;
};

template <class F>
WrappedResult wrapped_integral(int M, unsigned threads, F&& f) {
  double prev = grid_mean(M, threads, [&](long double t) { return wrapped_sq(f(t)); });
  while (M <= kMaxGrid / 2) {
    M *= 2;
    double cur = grid_mean(M, threads, [&](long double t) { return wrapped_sq(f(t)); });
    if (std::fabs(cur - prev) <= kWrappedTol) return {cur, M, true};
    prev = cur;
  }
  return {prev, M, false};
}

cplx pairing_sum(const SkewSystem& sys, int m, bool minus_sign, const char* what) {
  const RotationNumber& a = sys.alpha();
  if (m < 0 || m > a.depth()) throw RangeError(std::string(what) + ": index outside the expansion");
  const BigInt& qm = a.q(m);
  cplx s{0, 0};
  for (const auto& md : sys.phi().modes()) {
    if (BigInt(std::llabs(md.m)) >= qm) continue;
    cplx w = md.c * sys.eta().coeff(-md.m);
    if (w == cplx{0, 0}) continue;
    const long long u = minus_sign ? -md.m : md.m;
    if (a.is_integer_mul(u)) throw SmallDivisorError(std::string(what) + ": e(u alpha) = 1", md.m);
    cplx den = one_minus_e(a.frac_mul(static_cast<i128>(u)));
    if (std::abs(den) < kSmallDivisor) throw SmallDivisorError(std::string(what) + ": small divisor", md.m);
    s += w / den;
  }
  return s;
}

void require_real(const SkewSystem& sys, const char* what) {
  if (!sys.is_real()) throw InputError(std::string(what) + " needs real-valued phi, eta, psi");
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

long long integrand_max_freq(const SkewSystem& sys) {
  const long long kp = sys.phi().max_freq(), ke = sys.eta().max_freq(), ks = sys.psi().max_freq();
  return std::max({2 * kp, 2 * ke, ks, kp + ke});
}

RigidityReport rigidity_integrals(const SkewSystem& sys, long long n, int grid_M, unsigned threads) {
  if (n < 0) throw InputError("rigidity_integrals: n must be >= 0");
  const long long F = integrand_max_freq(sys);
  if (grid_M < 1 || static_cast<long long>(grid_M) < 2 * F + 1)
    throw GridError("rigidity_integrals: grid of " + std::to_string(grid_M) + " points is below the Nyquist bound " +
                    std::to_string(2 * F + 1));
  const BirkhoffSums bs = birkhoff(sys, n);
  RigidityReport rep;
  rep.n = n;
  rep.grid = grid_M;
  rep.I_Phi = grid_mean(grid_M, threads, [&](long double t) { return std::norm(bs.Phi.eval(t)); });
  rep.I_xi = grid_mean(grid_M, threads, [&](long double t) { return std::norm(bs.xi.eval(t)); });
  auto wo = wrapped_integral(grid_M, threads, [&](long double t) { return bs.Omega.eval(t); });
  auto wh = wrapped_integral(grid_M, threads, [&](long double t) { return bs.H.eval(t); });
  rep.I_Omega = wo.value;
  rep.I_H = wh.value;
  rep.wrapped_grid = std::max(wo.grid, wh.grid);
  rep.wrapped_converged = wo.converged && wh.converged;
  const double da = static_cast<double>(sys.alpha().dist_mul(static_cast<i128>(n)));
  rep.nalpha2 = da * da;
  rep.Sigma_n0 = bs.Sigma_n0;
  rep.bound_rhs = rep.nalpha2 + rep.I_Phi + rep.I_xi + rep.I_Omega + rep.I_H;
  return rep;
}

cplx lambda_qm(const SkewSystem& sys, int m) { return pairing_sum(sys, m, true, "lambda_qm"); }

cplx sigma_lt2(const SkewSystem& sys, int m) { return pairing_sum(sys, m, false, "sigma_lt2"); }

SigmaDecomposition sigma_decomposition(const SkewSystem& sys, long long n) {
  BirkhoffSums bs = birkhoff(sys, n);
  return {n, bs.Sigma_n0, bs.Sigma, bs.H};
}

std::vector<DecayRow> decay_experiment(const SkewSystem& sys, int m_lo, int m_hi, double theta, int grid_M,
                                       int max_j, unsigned threads) {
  const RotationNumber& a = sys.alpha();
  if (a.is_rational()) throw InputError("decay_experiment: Q'' is undefined for rational alpha");
  if (max_j < 1) throw InputError("decay_experiment: max_j must be >= 1");
  const IndexSets sets = classify_index_sets(a, theta, sys.B(), sys.sets().window);
  const double eps = 8 * theta;
  const double psi0 = sys.psi().mean().real();
  std::vector<DecayRow> rows;
  for (int m : sets.qdoubleprime) {
    if (m < m_lo || m > m_hi) continue;
    const BigInt& qb = a.q(m);
    if (qb > BigInt(std::numeric_limits<long long>::max() / 4))
      throw CapacityError("decay_experiment: q_m does not fit the 64-bit n range");
    const auto qm = static_cast<long long>(qb);
    const cplx lam = lambda_qm(sys, m);
    const cplx s2 = sigma_lt2(sys, m);
    const DirichletResult dir = dirichlet_search(a, m, {static_cast<long double>(psi0), lam.real()}, theta);
    const long double r = static_cast<long double>(dir.v) * static_cast<long double>(qm);
    const long double jr = std::pow(r, static_cast<long double>(theta) / 10);
    long long jmax = static_cast<long long>(std::ceil(jr)) - 1;
    jmax = std::clamp<long long>(jmax, 1, max_j);
    for (long long j = 1; j <= jmax; ++j) {
      DecayRow row;
      row.m = m;
      row.q_m = static_cast<std::uint64_t>(qm);
      row.v_m = dir.v;
      row.v_satisfied = dir.satisfied;
      row.j = j;
      row.s_m = j * static_cast<long long>(dir.v);
      if (row.s_m > std::numeric_limits<long long>::max() / qm)
        throw CapacityError("decay_experiment: n = s_m q_m overflows");
      row.n = row.s_m * qm;
      row.report = rigidity_integrals(sys, row.n, grid_M, threads);
      row.report.lambda_qm = lam;
      row.report.dirichlet = dir;
      row.budget = static_cast<double>(std::pow(r, -static_cast<long double>(eps) / 120));
      row.sigma_lt2 = s2;
      row.sigma_residual = std::abs(row.report.Sigma_n0 + static_cast<double>(row.n) * s2);
      row.q_m_pow_theta = std::pow(static_cast<double>(qm), -theta);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string decay_csv(const std::vector<DecayRow>& rows) {
  std::string out = "m,q_m,v_m,s_m,n,I_Phi,I_xi,I_Omega,I_H,rhs,budget\n";
  for (const auto& r : rows) {
    out += std::to_string(r.m) + "," + std::to_string(r.q_m) + "," + std::to_string(r.v_m) + "," +
           std::to_string(r.s_m) + "," + std::to_string(r.n) + "," + fmt_double(r.report.I_Phi) + "," +
           fmt_double(r.report.I_xi) + "," + fmt_double(r.report.I_Omega) + "," + fmt_double(r.report.I_H) + "," +
           fmt_double(r.report.bound_rhs) + "," + fmt_double(r.budget) + "\n";
  }
  return out;
}

// ---- observables ----------------------------------------------------------------

namespace {

int theta_terms(double eps_trunc) {
  // |k| < sqrt(|log eps|), k integer
  double lim = std::sqrt(std::fabs(std::log(eps_trunc)));
  int k = static_cast<int>(std::ceil(lim)) - 1;
  return std::max(k, 0);
}

struct ObsEval {
  cplx operator()(const CharacterObservable& c, double t, const HeisElt& g) const {
    long double ph = static_cast<long double>(c.m0) * t + static_cast<long double>(c.m1) * g.x +
                     static_cast<long double>(c.m2) * g.y;
    return e_frac(ph);
  }
  cplx operator()(const ThetaObservable& o, double t, const HeisElt& g) const {
    const long double pi = std::numbers::pi_v<long double>;
    long double ph = static_cast<long double>(o.m0) * t + static_cast<long double>(o.m1) * g.x +
                     static_cast<long double>(o.m2) * g.y + static_cast<long double>(o.m) * g.z;
    const int K = theta_terms(o.eps_trunc);
    std::complex<long double> s{0, 0};
    const std::complex<long double> dl(o.delta.real(), o.delta.imag());
    for (int k = -K; k <= K; ++k) {
      long double b = o.r + k;
      long double w = g.y + b;
      std::complex<long double> ex = std::exp(-pi * w * w - pi * dl * w);
      cplx c = e_frac(b * static_cast<long double>(o.m) * g.x);
      s += ex * std::complex<long double>(c.real(), c.imag());
    }
    cplx pre = e_frac(ph);
    std::complex<long double> v = std::complex<long double>(pre.real(), pre.imag()) * s;
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
  }
};

}  // namespace

cplx eval_observable(const Observable& f, double t, const HeisElt& rep) {
  return std::visit([&](const auto& o) { return ObsEval{}(o, t, rep); }, f);
}

double observable_sup(const Observable& f) {
  if (std::holds_alternative<CharacterObservable>(f)) return 1.0;
  const auto& o = std::get<ThetaObservable>(f);
  const double pi = std::numbers::pi;
  const double d = o.delta.real();
  const int K = theta_terms(o.eps_trunc);
  double s = 0;
  // y ranges over [0, 1]; w^2 + d w is minimised at -d/2
  for (int k = -K; k <= K; ++k) {
    double lo = o.r + k, hi = lo + 1;
    double w = std::clamp(-d / 2, lo, hi);
    s += std::exp(-pi * (w * w + d * w));
  }
  return s;
}

std::string observable_id(const Observable& f) {
  if (const auto* c = std::get_if<CharacterObservable>(&f))
    return "char(" + std::to_string(c->m0) + "," + std::to_string(c->m1) + "," + std::to_string(c->m2) + ")";
  const auto& o = std::get<ThetaObservable>(f);
  return "theta(" + std::to_string(o.m0) + "," + std::to_string(o.m1) + "," + std::to_string(o.m2) + "," +
         std::to_string(o.m) + ";r=" + fmt_double(o.r) + ";delta=" + fmt_double(o.delta.real()) +
         (o.delta.imag() < 0 ? "" : "+") + fmt_double(o.delta.imag()) + "i)";
}

void validate_observable(const Observable& f) {
  const auto* o = std::get_if<ThetaObservable>(&f);
  if (!o) return;
  const cplx d = o->delta;
  bool ok = d == cplx{0, 0} || d == cplx{1, 1} || d == cplx{1, -1};
  if (!ok) throw InputError("theta observable: delta must be 0, 1+i or 1-i");
  if (!(o->eps_trunc > 0 && o->eps_trunc < 1)) throw InputError("theta observable: eps_trunc must lie in (0, 1)");
  if (!std::isfinite(o->r)) throw InputError("theta observable: r must be finite");
}

// ---- correlation ----------------------------------------------------------------

namespace {

struct Segment {
  long long n_end;
  std::complex<long double> sum;
};

}  // namespace

CorrelationReport mobius_correlation(const SkewSystem& sys, const Observable& f, const PhasePoint& x0, long long N,
                                     std::vector<long long> checkpoints, const MobiusTable& mu, unsigned threads) {
  require_real(sys, "mobius_correlation");
  validate_observable(f);
  if (N < 1) throw InputError("mobius_correlation: N must be >= 1");
  if (mu.limit() < static_cast<std::uint64_t>(N)) throw InputError("mobius_correlation: Mobius table shorter than N");
  checkpoints.push_back(N);
  std::erase_if(checkpoints, [&](long long c) { return c < 1 || c > N; });
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  const RotationNumber& a = sys.alpha();
  const HeisElt g0 = x0.p.rep();
  const long long nblocks = (N + kCorrelationBlock - 1) / kCorrelationBlock;
  std::vector<std::vector<Segment>> segs(static_cast<std::size_t>(nblocks));
  std::vector<std::string> errors(static_cast<std::size_t>(nblocks));

  auto run_block = [&](long long b) {
    const long long lo = b * kCorrelationBlock + 1;
    const long long hi = std::min(N, (b + 1) * kCorrelationBlock);
    HeisElt Y = iterate_matrix(sys, x0.t, lo);
    auto cp = std::lower_bound(checkpoints.begin(), checkpoints.end(), lo);
    std::vector<Segment> out;
    std::complex<long double> acc{0, 0};
    for (long long n = lo; n <= hi; ++n) {
      long double tn = static_cast<long double>(x0.t) + a.frac_mul(static_cast<i128>(n));
      tn -= std::floor(tn);
      const int m = mu.mu(static_cast<std::uint64_t>(n));
      if (m != 0) {
        HeisElt rep = canonicalize(mul(g0, Y));
        cplx v = eval_observable(f, static_cast<double>(tn), rep);
        acc += static_cast<long double>(m) * std::complex<long double>(v.real(), v.imag());
      }
      if (cp != checkpoints.end() && *cp == n) {
        out.push_back({n, acc});
        acc = 0;
        ++cp;
      }
      if (n < hi) {
        HeisElt M{sys.eta().eval_re(tn), sys.phi().eval_re(tn), sys.psi().eval_re(tn)};
        Y = mul(Y, M);
      }
    }
    out.push_back({hi, acc});
    segs[static_cast<std::size_t>(b)] = std::move(out);
  };

  unsigned nt = std::max(1u, threads);
  if (nt == 1 || nblocks == 1) {
    for (long long b = 0; b < nblocks; ++b) run_block(b);
  } else {
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<unsigned>(nt, static_cast<unsigned>(nblocks)); ++w)
      pool.emplace_back([&]() {
        for (long long b; (b = next.fetch_add(1)) < nblocks;) {
          try {
            run_block(b);
          } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(b)] = e.what();
          }
        }
      });
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (!e.empty()) throw NumericError("mobius_correlation: " + e);
  }

  CorrelationReport rep;
  rep.N = N;
  rep.observable = observable_id(f);
  rep.base = x0;
  rep.sup_f = observable_sup(f);
  std::complex<long double> total{0, 0};
  auto cp = checkpoints.begin();
  for (const auto& blk : segs)
    for (const auto& s : blk) {
      total += s.sum;
      if (cp != checkpoints.end() && *cp == s.n_end) {
        const long double Nl = static_cast<long double>(s.n_end);
        rep.checkpoints.push_back({s.n_end, {static_cast<double>(total.real() / Nl),
                                             static_cast<double>(total.imag() / Nl)}});
        ++cp;
      }
    }
  return rep;
}

std::string correlation_csv(const CorrelationReport& rep) {
  std::string out = "N_checkpoint,re,im,abs\n";
  for (const auto& c : rep.checkpoints)
    out += std::to_string(c.N) + "," + fmt_double(c.value.real()) + "," + fmt_double(c.value.imag()) + "," +
           fmt_double(std::abs(c.value)) + "\n";
  return out;
}

}  // namespace nilflow
