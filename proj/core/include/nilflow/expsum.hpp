#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "nilflow/errors.hpp"
#include "nilflow/numtheory.hpp"

namespace nilflow {

using cplx = std::complex<double>;

// e(f) = exp(2 pi i f), argument reduced to (-1/2, 1/2] first.
inline cplx e_frac(long double f) {
  long double s = signed_frac(f);
  long double ang = 2.0L * std::numbers::pi_v<long double> * s;
  return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}

// 1 - e(f) = -2i sin(pi f) e(f/2), accurate when f is close to an integer.
inline cplx one_minus_e(long double f) {
  long double s = signed_frac(f);
  long double pi = std::numbers::pi_v<long double>;
  long double mag = 2.0L * std::sin(pi * s);
  long double ang = pi * s;
  // -i * mag * (cos ang + i sin ang) = mag sin ang - i mag cos ang
  return {static_cast<double>(mag * std::sin(ang)), static_cast<double>(-mag * std::cos(ang))};
}

inline constexpr double kSmallDivisor = 1e-300;

// Sum_{r=0}^{n-1} e(r m alpha). Exact resonance (m alpha an integer) gives n.
inline cplx geom_sum(const RotationNumber& rn, i128 m, long long n) {
  if (n <= 0) return {0.0, 0.0};
  if (rn.is_integer_mul(m)) return {static_cast<double>(n), 0.0};
  cplx den = one_minus_e(rn.frac_mul(m));
  if (std::abs(den) < kSmallDivisor) throw SmallDivisorError("geometric sum", static_cast<long long>(m));
  return one_minus_e(rn.frac_mul(m * static_cast<i128>(n))) / den;
}

}  // namespace nilflow
