#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "nilflow/heisenberg.hpp"
#include "nilflow/numtheory.hpp"
#include "nilflow/periodic.hpp"

namespace nilflow {

inline constexpr double kDefaultEpsilon = 0.009;
inline constexpr double kDefaultTheta = kDefaultEpsilon / 8;
inline constexpr double kDefaultB = 2 + 16 * kDefaultTheta;

class SkewSystem {
 public:
  // phi and eta must have zero mean; psi may carry a mean. `depth` limits the
  // index-set window (negative: whole expansion).
  static SkewSystem make(RotationNumber alpha, PeriodicFn phi, PeriodicFn eta, PeriodicFn psi,
                         double B = kDefaultB, double theta = kDefaultTheta, int depth = -1);

  const RotationNumber& alpha() const { return *alpha_; }
  const PeriodicFn& phi() const { return phi_; }
  const PeriodicFn& eta() const { return eta_; }
  const PeriodicFn& psi() const { return psi_; }
  double B() const { return B_; }
  double theta() const { return theta_; }
  const IndexSets& sets() const { return sets_; }
  long long K() const;
  bool is_real() const { return phi_.is_real() && eta_.is_real() && psi_.is_real(); }

  // Derived objects of the resonant split; throw the construction error if the
  // split could not be formed (e.g. the window is too short for the spectrum).
  const ResonantSplit& split_phi() const;
  const ResonantSplit& split_eta() const;
  const PeriodicFn& omega() const;        // psi + g_phi eta - phi+ (g_eta o l_alpha)
  const ResonantSplit& split_omega() const;
  const PeriodicFn& g_phi() const { return split_phi().cobound; }
  const PeriodicFn& g_eta() const { return split_eta().cobound; }
  const PeriodicFn& c() const { return split_omega().cobound; }
  // The system (alpha, phi+, eta+, omega+) that generates T1 = R^-1 S R.
  const SkewSystem& conjugated() const;
  // M1 meets the spectra of phi, eta and omega only in 0.
  bool finite_QB_regime() const;
  // Max |omega(t) - reconstruction| seen on the check grid at construction.
  double omega_check_error() const;

  struct Derived;  // lazily built split/omega/conjugate state

 private:
  const Derived& derived() const;
  std::shared_ptr<const RotationNumber> alpha_;
  PeriodicFn phi_, eta_, psi_;
  double B_ = kDefaultB, theta_ = kDefaultTheta;
  IndexSets sets_;
  std::shared_ptr<const Derived> derived_;
};

// (t, g) -> (t + alpha, g (eta(t), phi(t), psi(t)))
PhasePoint step(const SkewSystem& sys, const PhasePoint& p);
PhasePoint iterate(const SkewSystem& sys, const PhasePoint& p, long long n);

// The matrix entries (xi_n, Phi_n, Psi_n) at t as a group element.
HeisElt iterate_matrix(const SkewSystem& sys, long double t, long long n);

// Double sums over 1 <= j < n, 0 <= r < j of e((u r + v j) alpha).
cplx expsum_w0(const RotationNumber& alpha, long long u, long long n);  // v = -u
cplx expsum_w1(const RotationNumber& alpha, long long u, long long v, long long n);
cplx expsum_w2(const RotationNumber& alpha, long long u, long long v, long long n);
// w1 when ||u alpha|| >= ||v alpha||, else w2. Requires u + v != 0.
cplx expsum_w1w2(const RotationNumber& alpha, long long u, long long v, long long n);
// Any (u, v), including exact resonances at rational alpha.
cplx double_exp_sum(const RotationNumber& alpha, long long u, long long v, long long n);

struct BirkhoffSums {
  long long n = 0;
  PeriodicFn Phi, xi, Omega, H;  // trig polynomials in t
  cplx Sigma_n0{0, 0};           // mean of H_n (the u + v = 0 terms)
  PeriodicFn Sigma;              // H_n - Sigma_n0

  cplx Psi(long double t) const { return Omega.eval(t) + H.eval(t); }
};

BirkhoffSums birkhoff(const SkewSystem& sys, long long n);

// C_h(n, t) = sum_{r<n} h(t + r a/q) via the linear-in-n law.
cplx rational_birkhoff(const PeriodicFn& h, const RotationNumber& alpha, long long n, long double t);

struct QuadCoeffs {
  long long b = 0;  // residue class of n mod q
  cplx A2, A1, A0;  // H_n(t) = A2 n^2 + A1 n + A0 for n = b mod q
};
std::vector<QuadCoeffs> rational_H_coeffs(const SkewSystem& sys, long double t);
cplx rational_H(const SkewSystem& sys, long double t, long long n);

// Conjugacy R(t, g) = (t, g (g_eta(t), g_phi(t), c(t))) and T1 = R^-1 S R.
PhasePoint conj_R(const SkewSystem& sys, const PhasePoint& p);
PhasePoint conj_R_inv(const SkewSystem& sys, const PhasePoint& p);
PhasePoint conjugated_step_T1(const SkewSystem& sys, const PhasePoint& p);
PhasePoint iterate_T1(const SkewSystem& sys, const PhasePoint& p, long long m);
// (t + alpha, g central(omega-hat(0))); only in the finite-Q_B regime.
PhasePoint tilde_T1_step(const SkewSystem& sys, const PhasePoint& p);
PhasePoint tilde_T1_iterate(const SkewSystem& sys, const PhasePoint& p, long long m);

// Empirical constants for |H_m(t*) - H_m(t)| <= C' (q_k^-2 + q_k^2 |t - t*|) and
// |xi_m(t*) - xi_m(t)| <= C'' (q_k^-2 + q_k |t - t*|), 1 <= m <= n_k = q_k^(B-1),
// measured on the sums of the conjugated system (phi+, eta+). Each C is the
// largest observed ratio over the samples.
struct OscillationReport {
  int k = 0;
  std::uint64_t q_k = 0;
  long long n_k = 0;
  long long samples = 0;
  bool exploratory = false;  // q_k is not a member of Q_B
  double C_H = 0, C_xi = 0;
};
OscillationReport oscillation_constants(const SkewSystem& sys, int k, long long samples, std::uint64_t seed);

}  // namespace nilflow
