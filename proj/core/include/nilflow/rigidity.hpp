#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nilflow/dynamics.hpp"

namespace nilflow {

inline constexpr int kDefaultGrid = 4096;
inline constexpr double kWrappedTol = 1e-8;
inline constexpr int kMaxGrid = 1 << 22;

struct RigidityReport {
  long long n = 0;
  double I_Phi = 0, I_xi = 0, I_Omega = 0, I_H = 0;
  double nalpha2 = 0;  // ||n alpha||^2
  cplx lambda_qm{0, 0};
  cplx Sigma_n0{0, 0};
  std::optional<DirichletResult> dirichlet;
  double bound_rhs = 0;  // ||n alpha||^2 + I_Phi + I_xi + I_Omega + I_H
  int grid = 0;          // grid used by the plain trapezoid
  int wrapped_grid = 0;  // final grid of the wrapped integrals
  bool wrapped_converged = true;
};

// Largest frequency appearing in |Phi_n|^2, |xi_n|^2, Omega_n and H_n.
long long integrand_max_freq(const SkewSystem& sys);

// Trapezoid integrals of |Phi_n|^2, |xi_n|^2, ||Omega_n||^2 and ||H_n||^2.
// Throws GridError if grid_M < 2 * integrand_max_freq + 1.
RigidityReport rigidity_integrals(const SkewSystem& sys, long long n, int grid_M = kDefaultGrid,
                                  unsigned threads = 1);

// sum_{0<|u|<q_m} phi-hat(u) eta-hat(-u) / (1 - e(-u alpha))
cplx lambda_qm(const SkewSystem& sys, int m);
// sum_{0<|u|<q_m} phi-hat(u) eta-hat(-u) / (1 - e(u alpha))
cplx sigma_lt2(const SkewSystem& sys, int m);

struct SigmaDecomposition {
  long long n = 0;
  cplx Sigma_n0{0, 0};
  PeriodicFn Sigma;  // the u + v != 0 part of H_n
  PeriodicFn H;
};
SigmaDecomposition sigma_decomposition(const SkewSystem& sys, long long n);

struct DecayRow {
  int m = 0;
  std::uint64_t q_m = 0;
  std::uint64_t v_m = 0;
  bool v_satisfied = false;
  long long j = 0;
  long long s_m = 0;
  long long n = 0;
  RigidityReport report;
  double budget = 0;            // r_m^(-eps/120), eps = 8 theta
  cplx sigma_lt2{0, 0};
  double sigma_residual = 0;    // |Sigma_n0 + n sigma_lt2|
  double q_m_pow_theta = 0;     // q_m^-theta for comparison
};

// Rows for each q_m in Q'' with m_lo <= m <= m_hi and s_m = j v_m for
// 1 <= j < r_m^(theta/10) (at least j = 1), capped at `max_j` values of j.
// Rational alpha is refused.
std::vector<DecayRow> decay_experiment(const SkewSystem& sys, int m_lo, int m_hi, double theta,
                                       int grid_M = kDefaultGrid, int max_j = 4, unsigned threads = 1);

std::string decay_csv(const std::vector<DecayRow>& rows);

// ---- Mobius correlation --------------------------------------------------------

// e(m0 t + m1 x + m2 y)
struct CharacterObservable {
  long long m0 = 0, m1 = 0, m2 = 0;
};

// e(m0 t + m1 x + m2 y + m z) sum_{b in r + Z} exp(-pi (y+b)^2 - pi delta (y+b)) e(b m x),
// truncated to |b - r| < sqrt(|log eps_trunc|), evaluated on the canonical representative.
struct ThetaObservable {
  long long m0 = 0, m1 = 0, m2 = 0, m = 0;
  double r = 0;
  cplx delta{0, 0};  // 0, 1 + i or 1 - i
  double eps_trunc = 1e-8;
};

using Observable = std::variant<CharacterObservable, ThetaObservable>;

cplx eval_observable(const Observable& f, double t, const HeisElt& rep);
double observable_sup(const Observable& f);
std::string observable_id(const Observable& f);
// Validates delta and eps_trunc.
void validate_observable(const Observable& f);

struct CorrelationPoint {
  long long N = 0;
  cplx value{0, 0};  // (1/N) sum_{n<=N} mu(n) f(S^n x0)
};

struct CorrelationReport {
  long long N = 0;
  std::string observable;
  PhasePoint base;
  double sup_f = 0;
  std::vector<CorrelationPoint> checkpoints;
};

inline constexpr long long kCorrelationBlock = 1 << 16;

// Orbit points are advanced incrementally inside fixed blocks of
// kCorrelationBlock steps; each block is seeded by the closed-form iterate, so
// the result does not depend on the thread count.
CorrelationReport mobius_correlation(const SkewSystem& sys, const Observable& f, const PhasePoint& x0,
                                     long long N, std::vector<long long> checkpoints,
                                     const MobiusTable& mu, unsigned threads = 1);

std::string correlation_csv(const CorrelationReport& rep);

}  // namespace nilflow
