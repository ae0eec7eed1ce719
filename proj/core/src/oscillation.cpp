#include <cmath>
#include <random>

#include "nilflow/dynamics.hpp"
#include "nilflow/errors.hpp"

namespace nilflow {

OscillationReport oscillation_constants(const SkewSystem& sys, int k, long long samples, std::uint64_t seed) {
  const RotationNumber& a = sys.alpha();
  if (k < 0 || k > a.depth()) throw RangeError("oscillation_constants: k outside the expansion");
  if (samples < 1) throw InputError("oscillation_constants: need at least one sample");
  OscillationReport rep;
  rep.k = k;
  rep.q_k = a.q_u64(k);
  if (rep.q_k == UINT64_MAX) throw CapacityError("oscillation_constants: q_k exceeds 64 bits");
  const long double q = static_cast<long double>(rep.q_k);
  const long double nk = std::pow(q, static_cast<long double>(sys.B() - 1));
  if (!(nk < 9.2e18L)) throw CapacityError("oscillation_constants: n_k = q_k^(B-1) overflows");
  rep.n_k = std::max<long long>(1, static_cast<long long>(std::floor(nk)));
  const auto& res = sys.sets().resonant;
  rep.exploratory = !(static_cast<std::size_t>(k) < res.size() && res[static_cast<std::size_t>(k)]);
  rep.samples = samples;

  const SkewSystem& T1 = sys.conjugated();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<long double> U(0.0L, 1.0L);
  const long double log_nk = std::log(static_cast<long double>(rep.n_k));
  // |t - t*| spans q^-4 .. 1/2 on a log scale
  const long double log_lo = -4 * std::log(q) - std::log(2.0L), log_hi = -std::log(2.0L);
  const long double qd2 = 1 / (q * q);
  for (long long s = 0; s < samples; ++s) {
    long long m = static_cast<long long>(std::floor(std::exp(U(rng) * log_nk)));
    m = std::clamp<long long>(m, 1, rep.n_k);
    const long double t = U(rng);
    const long double dt = q > 1 ? std::exp(log_lo + U(rng) * (log_hi - log_lo)) : U(rng) / 2;
    const long double ts = t + dt;
    const BirkhoffSums bs = birkhoff(T1, m);
    const double dH = std::abs(bs.H.eval(ts) - bs.H.eval(t));
    const double dxi = std::abs(bs.xi.eval(ts) - bs.xi.eval(t));
    rep.C_H = std::max(rep.C_H, static_cast<double>(dH / (qd2 + q * q * dt)));
    rep.C_xi = std::max(rep.C_xi, static_cast<double>(dxi / (qd2 + q * dt)));
  }
  return rep;
}

}  // namespace nilflow
