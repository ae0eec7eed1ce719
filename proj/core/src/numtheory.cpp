#include "nilflow/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nilflow/errors.hpp"

namespace nilflow {

namespace mp = boost::multiprecision;

namespace {

const BigInt& two_pow(int bits) {
  static const BigInt p512 = BigInt(1) << 512;
  static const BigInt p200 = BigInt(1) << kEnvelopeBits;
  static const BigInt p262 = BigInt(1) << 262;
  if (bits == 512) return p512;
  if (bits == kEnvelopeBits) return p200;
  return p262;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  BigInt r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

BigInt mod_pos(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

u128 to_u128(const BigInt& v) {
  const BigInt mask = (BigInt(1) << 64) - 1;
  auto lo = static_cast<std::uint64_t>(v & mask);
  auto hi = static_cast<std::uint64_t>((v >> 64) & mask);
  return (static_cast<u128>(hi) << 64) | lo;
}

long double u128_to_unit(u128 x) {
  long double hi = static_cast<long double>(static_cast<std::uint64_t>(x >> 64));
  long double lo = static_cast<long double>(static_cast<std::uint64_t>(x));
  long double f = std::ldexp(hi, -64) + std::ldexp(lo, -128);
  return f >= 1.0L ? 0.0L : f;
}

bool fits_i64(const BigInt& v) {
  return v <= BigInt(std::numeric_limits<std::int64_t>::max()) &&
         v >= BigInt(std::numeric_limits<std::int64_t>::min());
}

std::string big_str(const BigInt& v) { return v.str(); }

}  // namespace

NearestFrac nearest_frac(double z) {
  double s = signed_frac(z);
  return {s, std::fabs(s)};
}

long double log_big(const BigInt& v) {
  if (v <= 0) return -std::numeric_limits<long double>::infinity();
  unsigned msb = mp::msb(v);
  if (msb < 62) return std::log(static_cast<long double>(static_cast<std::uint64_t>(v)));
  unsigned shift = msb - 62;
  auto top = static_cast<std::uint64_t>(v >> shift);
  return std::log(static_cast<long double>(top)) + shift * std::log(2.0L);
}

// ---- AlphaSpec factories ---------------------------------------------------

AlphaSpec AlphaSpec::from_rational(BigInt p, BigInt q) {
  if (q == 0) throw InputError("rational alpha needs a nonzero denominator");
  AlphaSpec s;
  s.kind = AlphaKind::Rational;
  s.rational = {std::move(p), std::move(q)};
  s.text = "rational:" + big_str(s.rational.p) + "/" + big_str(s.rational.q);
  return s;
}

AlphaSpec AlphaSpec::from_surd(BigInt a, BigInt b, BigInt d, BigInt c) {
  if (c == 0) throw InputError("surd alpha needs a nonzero denominator");
  if (b == 0 || d < 2) throw InputError("surd alpha needs b != 0 and d >= 2");
  BigInt r = boost::multiprecision::sqrt(d);
  if (r * r == d) throw InputError("surd alpha: d must not be a perfect square");
  AlphaSpec s;
  s.kind = AlphaKind::Surd;
  s.surd = {std::move(a), std::move(b), std::move(d), std::move(c)};
  s.text = "surd:(" + big_str(s.surd.a) + (s.surd.b < 0 ? "" : "+") + big_str(s.surd.b) +
           "*sqrt(" + big_str(s.surd.d) + "))/" + big_str(s.surd.c);
  return s;
}

AlphaSpec AlphaSpec::from_quotients(std::vector<BigInt> prefix, std::vector<BigInt> repeat) {
  AlphaSpec s;
  s.kind = repeat.empty() ? AlphaKind::Rational : AlphaKind::Stream;
  s.list = {std::move(prefix), std::move(repeat)};
  std::ostringstream os;
  os << "cf:[";
  for (std::size_t i = 0; i < s.list.prefix.size(); ++i) os << (i ? "," : "") << s.list.prefix[i];
  os << "]";
  if (!s.list.repeat.empty()) {
    os << ",repeat:[";
    for (std::size_t i = 0; i < s.list.repeat.size(); ++i) os << (i ? "," : "") << s.list.repeat[i];
    os << "]";
  }
  s.text = os.str();
  return s;
}

AlphaSpec AlphaSpec::from_generator(std::function<BigInt(std::size_t)> a, std::string label) {
  AlphaSpec s;
  s.kind = AlphaKind::Stream;
  s.generator = QuotientGeneratorSpec{std::move(a), label};
  s.text = "generator:" + label;
  return s;
}

AlphaSpec AlphaSpec::golden() { return from_surd(-1, 1, 5, 2); }
AlphaSpec AlphaSpec::silver() { return from_surd(-1, 1, 2, 1); }

// ---- RotationNumber accessors ----------------------------------------------

const BigInt& RotationNumber::a(int k) const {
  if (k < 1 || k > depth()) throw RangeError("partial quotient index out of expanded range");
  return a_[static_cast<std::size_t>(k)];
}
const BigInt& RotationNumber::l(int k) const {
  if (k < 0 || k > depth()) throw RangeError("convergent index out of expanded range");
  return l_[static_cast<std::size_t>(k)];
}
const BigInt& RotationNumber::q(int k) const {
  if (k < 0 || k > depth()) throw RangeError("convergent index out of expanded range");
  return q_[static_cast<std::size_t>(k)];
}
std::uint64_t RotationNumber::q_u64(int k) const {
  if (k < 0 || k > depth()) throw RangeError("convergent index out of expanded range");
  return q64_[static_cast<std::size_t>(k)];
}
long double RotationNumber::q_ld(int k) const {
  return static_cast<long double>(q(k));
}

long double RotationNumber::value_ld() const {
  if (is_rational()) return static_cast<long double>(p_) / static_cast<long double>(den_);
  return u128_to_unit(fixed128_);
}

bool RotationNumber::is_integer_mul(i128 m) const {
  if (!is_rational()) return m == 0;
  if (fits_i64(den_)) {
    auto d = static_cast<i128>(static_cast<std::int64_t>(den_));
    return m % d == 0;
  }
  BigInt mb = static_cast<long long>(m >> 64);
  mb = (mb << 64) + static_cast<std::uint64_t>(static_cast<u128>(m) & ~std::uint64_t{0});
  return mod_pos(mb * p_, den_) == 0;
}

u128 RotationNumber::frac_fixed128(i128 m) const {
  if (is_rational()) {
    BigInt mb = static_cast<long long>(m >> 64);
    mb = (mb << 64) + static_cast<std::uint64_t>(static_cast<u128>(m));
    BigInt r = mod_pos(mb * p_, den_);
    return to_u128((r << 128) / den_);
  }
  return static_cast<u128>(m) * fixed128_;
}

long double RotationNumber::frac_mul(i128 m) const {
  if (is_rational()) {
    if (fits_i64(den_)) {
      auto d = static_cast<i128>(static_cast<std::int64_t>(den_));
      auto p = static_cast<i128>(static_cast<std::int64_t>(p_));
      i128 r = m % d;
      if (r < 0) r += d;
      r = (r * p) % d;
      return static_cast<long double>(static_cast<std::int64_t>(r)) /
             static_cast<long double>(static_cast<std::int64_t>(d));
    }
    BigInt mb = static_cast<long long>(m >> 64);
    mb = (mb << 64) + static_cast<std::uint64_t>(static_cast<u128>(m));
    return frac_mul(mb);
  }
  const i128 lim = static_cast<i128>(1) << 64;
  if (m < lim && m > -lim) return u128_to_unit(static_cast<u128>(m) * fixed128_);
  BigInt mb = static_cast<long long>(m >> 64);
  mb = (mb << 64) + static_cast<std::uint64_t>(static_cast<u128>(m));
  return frac_mul(mb);
}

long double RotationNumber::frac_mul(const BigInt& m) const {
  if (is_rational()) {
    BigInt r = mod_pos(m * p_, den_);
    return static_cast<long double>(r) / static_cast<long double>(den_);
  }
  BigInt r = mod_pos(m * fixed_, two_pow(512));
  return u128_to_unit(to_u128(r >> 384));
}

long double RotationNumber::signed_frac_mul(i128 m) const {
  long double f = frac_mul(m);
  return f > 0.5L ? f - 1.0L : f;
}

BigInt RotationNumber::dist_fixed512(const BigInt& m) const {
  const BigInt& M = two_pow(512);
  if (is_rational()) {
    BigInt r = mod_pos(m * p_, den_);
    BigInt d = std::min(r, BigInt(den_ - r));
    return (d * M) / den_;
  }
  BigInt r = mod_pos(m * fixed_, M);
  return std::min(r, BigInt(M - r));
}

// ---- expansion ---------------------------------------------------------------

namespace {

struct Builder {
  RotationNumber* rn;
  std::vector<BigInt>* a;
  std::vector<BigInt>* l;
  std::vector<BigInt>* q;
  void start() {
    a->assign(1, BigInt(0));
    l->assign(1, BigInt(0));
    q->assign(1, BigInt(1));
  }
  void push(const BigInt& ak) {
    std::size_t k = q->size();  // new index
    BigInt lm1 = k >= 2 ? (*l)[k - 2] : BigInt(1);
    BigInt qm1 = k >= 2 ? (*q)[k - 2] : BigInt(0);
    a->push_back(ak);
    l->push_back(ak * (*l)[k - 1] + lm1);
    q->push_back(ak * (*q)[k - 1] + qm1);
  }
};

// Complete-quotient iteration for x = (P + sqrt D)/Q with Q | D - P^2.
class SurdStream {
 public:
  explicit SurdStream(const SurdSpec& s) {
    if (s.c == 0) throw InputError("surd: zero denominator");
    if (s.b == 0) throw InputError("surd: b = 0 is rational, use rational:p/q");
    if (s.d <= 0) throw InputError("surd: d must be positive");
    BigInt r = mp::sqrt(s.d);
    if (r * r == s.d) throw InputError("surd: d is a perfect square");
    int sg = s.b < 0 ? -1 : 1;
    BigInt P0 = sg * s.a, Q0 = sg * s.c;
    BigInt D0 = s.b * s.b * s.d;
    BigInt absQ = mp::abs(Q0);
    P_ = P0 * absQ;
    D_ = D0 * Q0 * Q0;
    Q_ = Q0 * absQ;
    sqrtD_ = mp::sqrt(D_);
  }
  BigInt next() {
    BigInt a;
    if (Q_ > 0) {
      a = floor_div(P_ + sqrtD_, Q_);
    } else {
      a = -(floor_div(P_ + sqrtD_, -Q_) + 1);
    }
    BigInt Pn = a * Q_ - P_;
    BigInt Qn = (D_ - Pn * Pn) / Q_;
    P_ = Pn;
    Q_ = Qn;
    return a;
  }

 private:
  BigInt P_, D_, Q_, sqrtD_;
};

BigInt surd_fixed512(const SurdSpec& s) {
  // floor(((a + b sqrt d)/c) 2^512) with c normalised positive.
  BigInt a = s.a, b = s.b, c = s.c;
  if (c < 0) {
    a = -a;
    b = -b;
    c = -c;
  }
  const BigInt& M = two_pow(512);
  BigInt rad = b * b * s.d * M * M;
  BigInt root = mp::sqrt(rad);  // floor(|b| sqrt(d) 2^512), never exact
  BigInt sfloor = b > 0 ? root : BigInt(-(root + 1));
  return floor_div(a * M + sfloor, c);
}

}  // namespace

RotationNumber expand_cf(const AlphaSpec& spec, int k_max) {
  RotationNumber rn;
  rn.description_ = spec.text;
  Builder bld{&rn, &rn.a_, &rn.l_, &rn.q_};
  bld.start();
  const bool unlimited = k_max < 0;
  auto want_more = [&](int k) { return unlimited || k < k_max; };

  if (spec.kind == AlphaKind::Rational && spec.list.prefix.empty()) {
    BigInt p = spec.rational.p, q = spec.rational.q;
    if (q == 0) throw InputError("rational: zero denominator");
    if (q < 0) {
      p = -p;
      q = -q;
    }
    if (p < 0 || p >= q) throw InputError("rational: alpha must lie in [0, 1)");
    BigInt g = mp::gcd(p, q);
    if (g > 1) {
      p /= g;
      q /= g;
    }
    rn.kind_ = AlphaKind::Rational;
    rn.p_ = p;
    rn.den_ = q;
    BigInt num = q, den = p;
    int k = 0;
    while (den != 0 && want_more(k)) {
      BigInt ak = num / den;
      BigInt r = num - ak * den;
      bld.push(ak);
      num = den;
      den = r;
      ++k;
    }
    rn.terminated_ = den == 0;
    rn.fixed_ = (p * two_pow(512)) / q;
  } else if (spec.kind == AlphaKind::Rational) {
    // finite quotient list [0; a1..an] is a rational number
    for (const auto& ak : spec.list.prefix)
      if (ak < 1) throw InputError("cf: partial quotients must be >= 1");
    RotationNumber full;
    Builder fb{&full, &full.a_, &full.l_, &full.q_};
    fb.start();
    for (const auto& ak : spec.list.prefix) fb.push(ak);
    const BigInt& p = full.l_.back();
    const BigInt& q = full.q_.back();
    AlphaSpec rs = AlphaSpec::from_rational(p, q);
    rs.text = spec.text;
    return expand_cf(rs, k_max);
  } else {
    rn.kind_ = spec.kind;
    std::function<BigInt()> next;
    std::size_t idx = 0;
    std::optional<SurdStream> surd;
    if (spec.kind == AlphaKind::Surd) {
      surd.emplace(spec.surd);
      BigInt a0 = surd->next();
      if (a0 != 0) throw InputError("surd: alpha must lie in [0, 1)");
      next = [&]() { return surd->next(); };
      rn.fixed_ = surd_fixed512(spec.surd);
    } else if (spec.generator) {
      next = [&]() {
        ++idx;
        BigInt v = spec.generator->a(idx);
        if (v < 1) throw InputError("cf generator produced a quotient < 1");
        return v;
      };
    } else {
      for (const auto& ak : spec.list.prefix)
        if (ak < 1) throw InputError("cf: partial quotients must be >= 1");
      for (const auto& ak : spec.list.repeat)
        if (ak < 1) throw InputError("cf: partial quotients must be >= 1");
      next = [&]() {
        const auto& L = spec.list;
        BigInt v = idx < L.prefix.size() ? L.prefix[idx]
                                         : L.repeat[(idx - L.prefix.size()) % L.repeat.size()];
        ++idx;
        return v;
      };
    }
    // Public convergents stay inside the envelope; streams keep expanding
    // privately until q > 2^262 to pin down the 512-bit image of alpha.
    int k = 0;
    BigInt lp = 0, qp = 1, lpp = 1, qpp = 0;
    bool inside = true;
    while (true) {
      if (inside && !want_more(k)) inside = false;
      if (!inside && (spec.kind == AlphaKind::Surd || qp > two_pow(262))) break;
      BigInt ak = next();
      BigInt ln = ak * lp + lpp, qn = ak * qp + qpp;
      lpp = lp;
      qpp = qp;
      lp = ln;
      qp = qn;
      if (inside) {
        if (qn >= two_pow(kEnvelopeBits)) {
          if (!unlimited) {
            throw PrecisionExhausted("expand_cf: q_" + std::to_string(k + 1) +
                                     " exceeds the 2^" + std::to_string(kEnvelopeBits) +
                                     " precision envelope");
          }
          inside = false;
        } else {
          bld.push(ak);
          ++k;
        }
      }
    }
    if (spec.kind != AlphaKind::Surd) rn.fixed_ = (lp * two_pow(512)) / qp;
    if (rn.fixed_ < 0 || rn.fixed_ >= two_pow(512))
      throw InputError("alpha must lie in [0, 1)");
  }
  rn.fixed128_ = to_u128(rn.fixed_ >> 384);
  rn.q64_.clear();
  for (const auto& q : rn.q_)
    rn.q64_.push_back(q > BigInt(std::numeric_limits<std::uint64_t>::max())
                          ? std::numeric_limits<std::uint64_t>::max()
                          : static_cast<std::uint64_t>(q));
  return rn;
}

// ---- best approximation ------------------------------------------------------

std::optional<BigInt> min_residue_hit(BigInt A, const BigInt& M, const BigInt& L, const BigInt& R) {
  if (L > R || R >= M || L < 0) return std::nullopt;
  if (L == 0) return BigInt(0);
  A = mod_pos(A, M);
  if (A == 0) return std::nullopt;
  if (2 * A > M) return min_residue_hit(M - A, M, M - R, M - L);
  BigInt k = (L + A - 1) / A;
  if (A * k <= R) return k;
  auto y = min_residue_hit(mod_pos(-M, A), A, L % A, R % A);
  if (!y) return std::nullopt;
  return (L + M * *y + A - 1) / A;
}

BestApproxReport check_best_approx(const RotationNumber& rn, int k, std::uint64_t scan_limit) {
  if (k < 1) throw RangeError("check_best_approx: k must be >= 1");
  BestApproxReport rep;
  rep.k = k;
  rep.q_k = rn.q(k);
  if (rn.is_rational() && rn.terminated() && k == rn.depth()) {
    rep.terminal_rational = true;
    rep.sandwich_ok = true;
    rep.best_ok = true;
    rep.witness_q = rep.q_k;
    rep.method = "exact-rational";
    return rep;
  }
  if (k + 1 > rn.depth()) throw RangeError("check_best_approx: q_{k+1} not expanded");
  rep.q_next = rn.q(k + 1);
  rep.lower = 1.0L / (2.0L * static_cast<long double>(rep.q_next));
  rep.upper = 1.0L / static_cast<long double>(rep.q_next);

  if (rn.is_rational()) {
    const BigInt& P = rn.num();
    const BigInt& Q = rn.den();
    BigInt r = mod_pos(rep.q_k * P, Q);
    BigInt dk = std::min(r, BigInt(Q - r));  // ||q_k alpha|| = dk / Q
    rep.dist_qk = static_cast<long double>(dk) / static_cast<long double>(Q);
    bool last_next = rn.terminated() && k + 1 == rn.depth();
    bool upper_ok = last_next ? dk * rep.q_next <= Q : dk * rep.q_next < Q;
    rep.sandwich_ok = 2 * dk * rep.q_next > Q && upper_ok;
    rep.method = "exact-rational";
    // Any x < q_{k+1} with residue strictly closer to an integer?
    auto h1 = dk > 1 ? min_residue_hit(P, Q, 1, dk - 1) : std::nullopt;
    auto h2 = dk > 1 ? min_residue_hit(P, Q, Q - dk + 1, Q - 1) : std::nullopt;
    bool beaten = (h1 && *h1 >= 1 && *h1 < rep.q_next) || (h2 && *h2 >= 1 && *h2 < rep.q_next);
    rep.best_ok = !beaten;
    // witness: smallest x achieving dk
    auto w1 = min_residue_hit(P, Q, dk, dk);
    auto w2 = min_residue_hit(P, Q, Q - dk, Q - dk);
    BigInt w = rep.q_k;
    if (w1 && *w1 >= 1) w = std::min(w, *w1);
    if (w2 && *w2 >= 1) w = std::min(w, *w2);
    rep.witness_q = w;
    rep.witness_min = rep.dist_qk;
    if (beaten) {
      BigInt b = rep.q_next;
      if (h1 && *h1 >= 1) b = std::min(b, *h1);
      if (h2 && *h2 >= 1) b = std::min(b, *h2);
      rep.witness_q = b;
      BigInt rb = mod_pos(b * P, Q);
      rep.witness_min = static_cast<long double>(std::min(rb, BigInt(Q - rb))) /
                        static_cast<long double>(Q);
    }
    return rep;
  }

  if (rep.q_next <= scan_limit) {
    auto qn = static_cast<std::uint64_t>(rep.q_next);
    auto dist128 = [&](std::uint64_t x) {
      u128 f = rn.frac_fixed128(static_cast<i128>(x));
      u128 g = static_cast<u128>(0) - f;
      return f < g ? f : g;
    };
    auto qk = static_cast<std::uint64_t>(rep.q_k);
    u128 dk = dist128(qk);
    u128 best = dk;
    std::uint64_t arg = qk;
    for (std::uint64_t x = 1; x < qn; ++x) {
      u128 d = dist128(x);
      if (d < best || (d == best && x < arg)) {
        best = d;
        arg = x;
      }
    }
    rep.dist_qk = u128_to_unit(dk);
    rep.witness_q = arg;
    rep.witness_min = u128_to_unit(best);
    rep.best_ok = best == dk;
    rep.sandwich_ok = rep.dist_qk > rep.lower && rep.dist_qk < rep.upper;
    rep.method = "exhaustive";
    return rep;
  }

  const BigInt& M = two_pow(512);
  BigInt T = rn.dist_fixed512(rep.q_k);
  BigInt margin = rep.q_next + 2;
  if (T <= 2 * margin) {
    throw PrecisionExhausted("check_best_approx: ||q_k alpha|| below the fixed-point resolution");
  }
  rep.dist_qk = static_cast<long double>(T) / static_cast<long double>(M);
  // sandwich with the truncation error folded in on the unfavourable side
  rep.sandwich_ok = 2 * (T - margin) * rep.q_next > M && (T + margin) * rep.q_next < M;
  auto h1 = min_residue_hit(rn.fixed512(), M, 1, T - margin);
  auto h2 = min_residue_hit(rn.fixed512(), M, M - T + margin, M - 1);
  bool beaten = (h1 && *h1 >= 1 && *h1 < rep.q_next) || (h2 && *h2 >= 1 && *h2 < rep.q_next);
  rep.best_ok = !beaten;
  rep.witness_q = rep.q_k;
  rep.witness_min = rep.dist_qk;
  if (beaten) {
    BigInt b = rep.q_next;
    if (h1 && *h1 >= 1) b = std::min(b, *h1);
    if (h2 && *h2 >= 1) b = std::min(b, *h2);
    rep.witness_q = b;
    rep.witness_min = static_cast<long double>(rn.dist_fixed512(b)) / static_cast<long double>(M);
  }
  rep.method = "certified";
  return rep;
}

// ---- (p3)/(p4) ---------------------------------------------------------------

namespace {

std::uint64_t checked_range(const RotationNumber& rn, int k, std::uint64_t max_terms) {
  if (k < 1) throw RangeError("k must be >= 1");
  if (k + 1 > rn.depth()) throw RangeError("q_{k+1} not expanded");
  const BigInt& qn = rn.q(k + 1);
  if (qn > BigInt(max_terms)) throw CapacityError("small-denominator sum exceeds the term budget");
  return static_cast<std::uint64_t>(qn);
}

long double dist_ld(const RotationNumber& rn, std::uint64_t x) {
  if (rn.is_rational()) return rn.dist_mul(static_cast<i128>(x));
  u128 f = rn.frac_fixed128(static_cast<i128>(x));
  u128 g = static_cast<u128>(0) - f;
  return u128_to_unit(f < g ? f : g);
}

}  // namespace

SmallDenominatorSums small_denominator_sums(const RotationNumber& rn, int k,
                                            std::uint64_t max_terms) {
  std::uint64_t qn = checked_range(rn, k, max_terms);
  auto qk = static_cast<std::uint64_t>(rn.q(k));
  SmallDenominatorSums s;
  s.k = k;
  long double s1 = 0, s2 = 0;
  for (std::uint64_t x = 1; x < qn; ++x) {
    long double d = dist_ld(rn, x);
    if (d == 0) throw SmallDivisorError("small_denominator_sums: ||q alpha|| = 0", static_cast<long long>(x));
    if (x < qk) s1 += 1.0L / d;
    s2 += 1.0L / (d * d);
  }
  s.S1 = 2 * s1;
  s.S2 = 2 * s2;
  long double qkl = static_cast<long double>(qk), qnl = static_cast<long double>(qn);
  s.ratio1 = s.S1 / (qkl * std::log(qkl + 1.0L));
  s.ratio2 = s.S2 / (qnl * qnl);
  return s;
}

long double p3_sum(const RotationNumber& rn, int k, long double c, std::uint64_t max_terms) {
  std::uint64_t qn = checked_range(rn, k, max_terms);
  auto qk = static_cast<std::uint64_t>(rn.q(k));
  long double sum = 0;
  for (std::uint64_t x = qk; x < qn; ++x) {
    long double d = dist_ld(rn, x);
    long double inv2 = d == 0 ? c * c : std::min(1.0L / (d * d), c * c);
    long double xl = static_cast<long double>(x);
    sum += inv2 / (xl * xl);
  }
  return 2 * sum;
}

// ---- Dirichlet -----------------------------------------------------------------

DirichletResult dirichlet_search(const RotationNumber& rn, int m,
                                 const std::vector<long double>& targets, double theta) {
  if (!std::isfinite(theta)) throw RangeError("dirichlet_search: theta must be finite");
  const BigInt& qm = rn.q(m);
  long double logq = log_big(qm);
  long double hi = std::exp(0.5L * theta * logq);
  if (hi < 1.0L) throw RangeError("dirichlet_search: empty range, q_m^(theta/2) < 1");
  DirichletResult res;
  res.range_hi = static_cast<std::uint64_t>(std::ceil(hi - 1e-15L));
  if (res.range_hi < 1) res.range_hi = 1;
  res.bound = std::exp(-theta * logq / 3.0L);
  long double qml = static_cast<long double>(qm);
  long double best = std::numeric_limits<long double>::infinity();
  std::uint64_t arg = 1;
  for (std::uint64_t v = 1; v <= res.range_hi; ++v) {
    long double da = rn.frac_mul(BigInt(v) * qm);
    da = frac_dist(da);
    long double worst = da * da;
    for (long double tau : targets) {
      long double d = frac_dist(static_cast<long double>(v) * qml * tau);
      worst = std::max(worst, d * d);
    }
    if (worst <= res.bound) {
      res.v = v;
      res.satisfied = true;
      res.worst = worst;
      return res;
    }
    if (worst < best) {
      best = worst;
      arg = v;
    }
  }
  res.v = arg;
  res.satisfied = false;
  res.worst = best;
  return res;
}

}  // namespace nilflow
