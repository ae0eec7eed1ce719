#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nilflow/errors.hpp"
#include "nilflow/numtheory.hpp"

namespace nilflow {

IndexSets classify_index_sets(const RotationNumber& rn, double theta, double B, int depth) {
  if (!(theta > 0.0) || !(theta < 1.0 / 12.0))
    throw InputError("classify_index_sets: theta must lie in (0, 1/12)");
  if (!(B > 2.0) || !std::isfinite(B)) throw InputError("classify_index_sets: B must exceed 2");
  if (depth < 0 || depth > rn.depth())
    throw RangeError("classify_index_sets: depth beyond the expansion");

  IndexSets s;
  s.theta = theta;
  s.B = B;
  s.window = depth;
  s.open_ended = rn.is_rational() && rn.terminated() && depth == rn.depth();
  s.window_limited = !s.open_ended;
  for (int k = 0; k <= depth; ++k) s.q.push_back(rn.q_u64(k));

  std::vector<long double> lq;
  for (int k = 0; k <= depth; ++k) lq.push_back(log_big(rn.q(k)));

  int last_literal = -1;  // last index in Q' counting the trivial q = 1 entries
  s.resonant.assign(static_cast<std::size_t>(depth) + 1, false);
  for (int m = 0; m <= depth; ++m) {
    bool has_next = m < depth;
    bool big = rn.q(m) > 1;
    bool in_qprime, in_qb;
    if (has_next) {
      in_qprime = lq[m + 1] >= (2.0L + 2.0L * theta) * lq[m];
      in_qb = static_cast<long double>(B) * lq[m] < lq[m + 1];
    } else if (s.open_ended) {
      in_qprime = in_qb = true;  // q_{K+1} = infinity
    } else {
      continue;
    }
    if (in_qprime) last_literal = m;
    if (in_qprime && big) s.qprime.push_back(m);
    // For a fully expanded rational the last denominator also owns every
    // larger multiple; with alpha = 0 that makes every frequency resonant.
    if (in_qb && (big || (!has_next && s.open_ended))) {
      s.qB.push_back(m);
      s.resonant[static_cast<std::size_t>(m)] = true;
    }
  }

  // A finite window cannot decide whether Q' is infinite. Members only in the
  // early part of the window look like a finite Q' with a tail after them.
  int tail_start = depth / 2;
  s.qprime_infinite = std::any_of(s.qprime.begin(), s.qprime.end(),
                                  [&](int m) { return m >= tail_start; });
  if (s.qprime_infinite) {
    s.m0 = s.qprime.front();
    s.qdoubleprime = s.qprime;
  } else {
    s.m0 = last_literal + 1;
    int hi = s.open_ended ? depth : depth - 1;
    for (int m = std::max(s.m0, 0); m <= hi; ++m)
      if (rn.q(m) > 1) s.qdoubleprime.push_back(m);
  }
  return s;
}

std::uint64_t IndexSets::membership_limit() const {
  if (open_ended) return std::numeric_limits<std::uint64_t>::max();
  return q.back() == 0 ? 0 : q.back() - 1;
}

bool IndexSets::in_M1(long long m) const {
  if (m == 0) return true;
  std::uint64_t a = m < 0 ? 0ull - static_cast<std::uint64_t>(m) : static_cast<std::uint64_t>(m);
  // largest k with q_k <= a
  auto it = std::upper_bound(q.begin(), q.end(), a);
  int k = static_cast<int>(it - q.begin()) - 1;
  if (k >= window && !open_ended)
    throw std::out_of_range("M1 membership undecided: |m| >= q_" + std::to_string(window));
  if (!resonant[static_cast<std::size_t>(k)]) return false;
  return a % q[static_cast<std::size_t>(k)] == 0;
}

}  // namespace nilflow
