#pragma once

// Slow, direct reference computations. None of these call the closed forms
// they are used to check.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstdint>
#include <functional>
#include <vector>

#include "nilflow/dynamics.hpp"
#include "nilflow/heisenberg.hpp"
#include "nilflow/numtheory.hpp"
#include "nilflow/periodic.hpp"

namespace nilflow::oracle {

using HP = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<240>>;

// alpha to ~240 digits; list expansions are evaluated from `depth` terms.
HP alpha_hp(const AlphaSpec& spec, int depth = 600);

// Partial quotients a_1..a_count of frac(x) by floating Euclid.
std::vector<BigInt> cf_quotients(const HP& x, int count);
// Exact Euclid on p/q, returns a_1, a_2, ... (a_0 dropped).
std::vector<BigInt> euclid_cf(BigInt p, BigInt q);
// q_0 = 1, q_1 = a_1, q_k = a_k q_{k-1} + q_{k-2}
std::vector<BigInt> denominators(const std::vector<BigInt>& a);
BigInt fibonacci(int k);

// ||q x|| in high precision.
HP dist_hp(const HP& x, const BigInt& q);
// True iff ||q x|| > ||qk x|| for every 0 < q < q_next with q != qk.
bool best_approx_exhaustive(const HP& x, std::uint64_t qk, std::uint64_t q_next);

int mobius_trial(std::uint64_t n);
long long mertens_trial(std::uint64_t N);

// sum_{j=1}^{n-1} sum_{r=0}^{j-1} e((u r + v j) alpha), term by term.
cplx double_sum(long double alpha, long long u, long long v, long long n);
// sum_{r<n} h(t + r alpha)
cplx birkhoff_direct(const PeriodicFn& h, long double alpha, long long n, long double t);
// sum_{j=1}^{n-1} sum_{r<j} phi(t + r alpha) eta(t + j alpha)
cplx H_direct(const PeriodicFn& phi, const PeriodicFn& eta, long double alpha, long long n, long double t);

// n applications of step().
PhasePoint repeated_steps(const SkewSystem& sys, PhasePoint p, long long n);

// Midpoint rule with M nodes.
double midpoint_mean(const std::function<double(double)>& f, int M);

// Minimum over every lattice element with all three entries in [-W, W] of
// max(|x|, |y|, min(|z - xy|, |z|)) for D = rep(p)^-1 gamma rep(q), without
// reducing z.
double dist_nil_exhaustive(const NilPoint& p, const NilPoint& q, int W = 4);

}  // namespace nilflow::oracle
