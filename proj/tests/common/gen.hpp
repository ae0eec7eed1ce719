#pragma once

// Random instances for the property tests. Every generator takes the engine
// explicitly so failures replay from the seed printed by the test.

#include <random>
#include <vector>

#include "nilflow/dynamics.hpp"

namespace nilflow::testgen {

using Rng = std::mt19937_64;

inline double uniform(Rng& r, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(r); }
inline long long integer(Rng& r, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(r);
}

inline HeisElt heis(Rng& r, double scale = 3.0) {
  return {uniform(r, -scale, scale), uniform(r, -scale, scale), uniform(r, -scale, scale)};
}

inline PhasePoint phase_point(Rng& r) {
  return PhasePoint::make(uniform(r, 0, 1), HeisElt{uniform(r, 0, 1), uniform(r, 0, 1), uniform(r, -0.5, 0.5)});
}

// Real trigonometric polynomial with frequencies 1..K, coefficients
// |c_m| <= amp / m^2.
inline PeriodicFn real_trig(Rng& r, int K, double amp = 1.0, double mean = 0.0) {
  std::vector<Mode> modes;
  for (int m = 1; m <= K; ++m) {
    if (integer(r, 0, 3) == 0) continue;
    double s = amp / (m * m);
    cplx c{uniform(r, -s, s) / 2, uniform(r, -s, s) / 2};
    modes.push_back({m, c});
    modes.push_back({-m, std::conj(c)});
  }
  return PeriodicFn::make(modes, mean, std::nullopt, true);
}

// Quadratic surd (sqrt(d) - floor(sqrt(d))) or a golden/silver variant.
inline AlphaSpec irrational(Rng& r) {
  switch (integer(r, 0, 3)) {
    case 0: return AlphaSpec::golden();
    case 1: return AlphaSpec::silver();
    default: {
      static const int ds[] = {3, 6, 7, 11, 13, 19, 23, 29, 31, 41};
      int d = ds[integer(r, 0, 9)];
      int f = 0;
      while ((f + 1) * (f + 1) <= d) ++f;
      return AlphaSpec::from_surd(-f, 1, d, 1);
    }
  }
}

inline SkewSystem random_system(Rng& r, int K = 3, int depth = 25) {
  RotationNumber a = expand_cf(irrational(r), depth);
  return SkewSystem::make(std::move(a), real_trig(r, K), real_trig(r, K), real_trig(r, K, 1.0, uniform(r, -1, 1)));
}

inline SkewSystem cos_system(const AlphaSpec& spec, int depth = 25) {
  PeriodicFn c = PeriodicFn::cos_mode(1);
  return SkewSystem::make(expand_cf(spec, depth), c, c, PeriodicFn::sin_mode(1));
}

}  // namespace nilflow::testgen
