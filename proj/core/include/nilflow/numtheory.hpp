#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace nilflow {

using BigInt = boost::multiprecision::cpp_int;
__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

// <z> = z - n_z with n_z the nearest integer, ties resolved so <n + 1/2> = +1/2.
template <class Real>
inline Real signed_frac(Real z) {
  using std::ceil;
  return z - ceil(z - Real(0.5));
}

template <class Real>
inline Real frac_dist(Real z) {
  using std::fabs;
  return fabs(signed_frac(z));
}

struct NearestFrac {
  double signed_frac;
  double dist;
};
NearestFrac nearest_frac(double z);

// ---- alpha specifications (config grammar) --------------------------------

struct RationalSpec {
  BigInt p, q;
};
// (a + b*sqrt(d)) / c
struct SurdSpec {
  BigInt a, b, d, c;
};
// [0; prefix..., repeat, repeat, ...]; an empty repeat means a finite expansion.
struct QuotientListSpec {
  std::vector<BigInt> prefix;
  std::vector<BigInt> repeat;
};
// a(k) for k >= 1, an unbounded generator (e.g. Liouville-like streams).
struct QuotientGeneratorSpec {
  std::function<BigInt(std::size_t)> a;
  std::string label;
};

enum class AlphaKind { Rational, Surd, Stream };

struct AlphaSpec {
  AlphaKind kind = AlphaKind::Rational;
  RationalSpec rational{0, 1};
  SurdSpec surd{};
  QuotientListSpec list{};
  std::optional<QuotientGeneratorSpec> generator;
  std::string text;

  static AlphaSpec from_rational(BigInt p, BigInt q);
  static AlphaSpec from_surd(BigInt a, BigInt b, BigInt d, BigInt c);
  static AlphaSpec from_quotients(std::vector<BigInt> prefix, std::vector<BigInt> repeat = {});
  static AlphaSpec from_generator(std::function<BigInt(std::size_t)> a, std::string label);
  static AlphaSpec golden();      // (sqrt5 - 1)/2
  static AlphaSpec silver();      // sqrt2 - 1
};

// Parses `rational:p/q`, `surd:(a+b*sqrt(d))/c`, `cf:[a1,...]` and
// `cf:[a1,...],repeat:[b1,...]`. Throws InputError on malformed text.
AlphaSpec parse_alpha(const std::string& text);

// ---- RotationNumber -------------------------------------------------------

inline constexpr int kFixedBits = 512;
// Irrational expansions stop before q_k reaches 2^kEnvelopeBits so that
// ||q alpha|| stays far above the 2^-512 resolution of the fixed-point image.
inline constexpr int kEnvelopeBits = 200;

class RotationNumber {
 public:
  AlphaKind kind() const noexcept { return kind_; }
  bool is_rational() const noexcept { return kind_ == AlphaKind::Rational; }
  // True when the expansion ended (rational alpha fully expanded).
  bool terminated() const noexcept { return terminated_; }
  // Largest k for which (l_k, q_k) is available.
  int depth() const noexcept { return static_cast<int>(q_.size()) - 1; }

  // a_k for 1 <= k <= depth.
  const BigInt& a(int k) const;
  const BigInt& l(int k) const;
  const BigInt& q(int k) const;
  // q_k saturated to uint64 (UINT64_MAX when it does not fit).
  std::uint64_t q_u64(int k) const;
  long double q_ld(int k) const;

  // Exact p/q for rational alpha.
  const BigInt& num() const { return p_; }
  const BigInt& den() const { return den_; }

  // frac(m alpha) in [0, 1). Exact for rational alpha; otherwise accurate to
  // about 2^-64 relative to 1 for every m that fits in 127 bits.
  long double frac_mul(i128 m) const;
  long double frac_mul(const BigInt& m) const;
  long double signed_frac_mul(i128 m) const;
  long double dist_mul(i128 m) const { return fabsl(signed_frac_mul(m)); }
  // True iff m alpha is an integer (only possible for rational alpha).
  bool is_integer_mul(i128 m) const;

  // m alpha mod 1 as a 128-bit fixed-point fraction.
  u128 frac_fixed128(i128 m) const;
  // ||m alpha|| * 2^512 as an exact (rational) or truncated (irrational) integer.
  BigInt dist_fixed512(const BigInt& m) const;

  double value() const { return static_cast<double>(value_ld()); }
  long double value_ld() const;
  const BigInt& fixed512() const { return fixed_; }
  const std::string& description() const { return description_; }

 private:
  friend RotationNumber expand_cf(const AlphaSpec& spec, int k_max);
  AlphaKind kind_ = AlphaKind::Rational;
  bool terminated_ = false;
  std::vector<BigInt> a_;   // a_[0] = floor(alpha) = 0
  std::vector<BigInt> l_;
  std::vector<BigInt> q_;
  std::vector<std::uint64_t> q64_;
  BigInt p_ = 0, den_ = 1;  // rational only
  BigInt fixed_ = 0;        // floor(alpha * 2^512)
  u128 fixed128_ = 0;       // fixed_ >> 384
  std::string description_;
};

// Expands alpha to depth k_max (or to termination for rationals, whichever
// comes first). Throws PrecisionExhausted if an irrational expansion would
// need q_k >= 2^kEnvelopeBits, InputError for alpha outside [0, 1).
RotationNumber expand_cf(const AlphaSpec& spec, int k_max);

// ---- (p2) best approximation ---------------------------------------------

struct BestApproxReport {
  int k = 0;
  BigInt q_k, q_next;
  long double dist_qk = 0;        // ||q_k alpha||
  long double lower = 0, upper = 0;  // 1/(2 q_{k+1}), 1/q_{k+1}
  bool sandwich_ok = false;
  bool best_ok = false;
  bool terminal_rational = false;
  BigInt witness_q;               // argmin of ||q alpha|| over 1 <= q < q_{k+1}
  long double witness_min = 0;
  std::string method;             // "exhaustive", "certified", "exact-rational"
};

// Exhaustive scan up to `scan_limit`; above it the best-approximation claim is
// certified with an exact minimal-residue search on the 512-bit image.
BestApproxReport check_best_approx(const RotationNumber& rn, int k,
                                   std::uint64_t scan_limit = (1u << 24));

// Smallest x >= 0 with L <= (A x mod M) <= R, if any. Exposed for testing.
std::optional<BigInt> min_residue_hit(BigInt A, const BigInt& M, const BigInt& L, const BigInt& R);

// ---- (p3)/(p4) small denominators ----------------------------------------

struct SmallDenominatorSums {
  int k = 0;
  long double S1 = 0, S2 = 0;
  long double ratio1 = 0, ratio2 = 0;  // S1/(q_k log(q_k+1)), S2/q_{k+1}^2
};
SmallDenominatorSums small_denominator_sums(const RotationNumber& rn, int k,
                                            std::uint64_t max_terms = (1ull << 28));

// sum over q_k <= |q| < q_{k+1} of q^-2 min(||q alpha||^-2, c^2)
long double p3_sum(const RotationNumber& rn, int k, long double c,
                   std::uint64_t max_terms = (1ull << 28));

// ---- Mobius ---------------------------------------------------------------

inline constexpr std::uint64_t kMobiusMax = 100'000'000;
inline constexpr std::size_t kSieveBlock = 1u << 16;

class MobiusTable {
 public:
  MobiusTable() = default;
  std::uint64_t limit() const noexcept { return n_; }
  int mu(std::uint64_t n) const { return values_.at(n); }
  const std::int8_t* data() const noexcept { return values_.data(); }
  // Sum of mu(k) for k <= n.
  long long mertens(std::uint64_t n) const;

 private:
  friend MobiusTable mobius_sieve(std::uint64_t N, unsigned threads);
  std::uint64_t n_ = 0;
  std::vector<std::int8_t> values_;  // index 0 unused
};

MobiusTable mobius_sieve(std::uint64_t N, unsigned threads = 1);

// ---- Dirichlet ------------------------------------------------------------

struct DirichletResult {
  std::uint64_t v = 1;
  bool satisfied = false;   // false: the bound failed for every v, v is the argmin
  long double worst = 0;    // max of the squared distances at v
  long double bound = 0;    // q_m^(-theta/3)
  std::uint64_t range_hi = 1;
};

// Always includes ||v q_m alpha||^2; `targets` are further reals tau whose
// ||v q_m tau||^2 must also be small (psi-hat(0), lambda(q_m)).
DirichletResult dirichlet_search(const RotationNumber& rn, int m,
                                 const std::vector<long double>& targets, double theta);

// ---- index sets -----------------------------------------------------------

struct IndexSets {
  double theta = 0, B = 0;
  int window = 0;                 // indices 0..window have q known
  bool window_limited = true;
  bool qprime_infinite = false;   // window verdict, see classify_index_sets
  int m0 = 0;
  std::vector<int> qprime;        // indices m (q_m > 1)
  std::vector<int> qdoubleprime;
  std::vector<int> qB;            // indices l with q_l > 1, q_l^B < q_{l+1}
  std::vector<bool> resonant;     // per k: q_k > 1 and q_k^B < q_{k+1}
  std::vector<std::uint64_t> q;   // saturated copy of the convergent denominators
  bool open_ended = false;        // rational: q_{K+1} = infinity

  bool in_M1(long long m) const;
  bool in_M2(long long m) const { return !in_M1(m); }
  // Largest |m| for which membership is decided.
  std::uint64_t membership_limit() const;
};

IndexSets classify_index_sets(const RotationNumber& rn, double theta, double B, int depth);

// log of a positive big integer.
long double log_big(const BigInt& v);

}  // namespace nilflow
