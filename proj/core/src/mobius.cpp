#include <algorithm>
#include <atomic>
#include <cmath>
#include <new>
#include <thread>
#include <vector>

#include "nilflow/errors.hpp"
#include "nilflow/numtheory.hpp"

namespace nilflow {

namespace {

std::vector<std::uint32_t> small_primes(std::uint32_t limit) {
  std::vector<char> comp(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (comp[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = std::uint64_t{i} * i; j <= limit; j += i) comp[j] = 1;
  }
  return primes;
}

// mu on [lo, hi). `prod` collects the product of the sieving primes dividing n;
// a leftover factor means exactly one prime above sqrt(N).
void sieve_block(std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint32_t>& primes,
                 std::int8_t* out, std::vector<std::uint32_t>& prod) {
  const std::size_t len = hi - lo;
  std::fill(out, out + len, std::int8_t{1});
  prod.assign(len, 1u);
  for (std::uint32_t p : primes) {
    std::uint64_t pp = std::uint64_t{p} * p;
    std::uint64_t start = (lo + p - 1) / p * p;
    for (std::uint64_t n = start; n < hi; n += p) {
      out[n - lo] = static_cast<std::int8_t>(-out[n - lo]);
      prod[n - lo] *= p;
    }
    start = (lo + pp - 1) / pp * pp;
    for (std::uint64_t n = start; n < hi; n += pp) out[n - lo] = 0;
  }
  for (std::size_t i = 0; i < len; ++i) {
    std::uint64_t n = lo + i;
    if (out[i] != 0 && prod[i] < n) out[i] = static_cast<std::int8_t>(-out[i]);
  }
}

}  // namespace

MobiusTable mobius_sieve(std::uint64_t N, unsigned threads) {
  if (N < 1) throw InputError("mobius_sieve: N must be >= 1");
  if (N > kMobiusMax) throw CapacityError("mobius_sieve: N exceeds the 10^8 capacity bound");
  MobiusTable t;
  t.n_ = N;
  try {
    t.values_.assign(N + 1, 0);
  } catch (const std::bad_alloc&) {
    throw CapacityError("mobius_sieve: allocation failed for N = " + std::to_string(N));
  }
  auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(N)));
  while (std::uint64_t{root + 1} * (root + 1) <= N) ++root;
  const auto primes = small_primes(root);

  const std::uint64_t nblocks = (N + kSieveBlock - 1) / kSieveBlock;  // blocks cover [1, N]
  if (threads == 0) threads = 1;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, nblocks));
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    std::vector<std::uint32_t> prod;
    for (std::uint64_t b = next++; b < nblocks; b = next++) {
      std::uint64_t lo = 1 + b * kSieveBlock;
      std::uint64_t hi = std::min(N + 1, lo + kSieveBlock);
      sieve_block(lo, hi, primes, t.values_.data() + lo, prod);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return t;
}

long long MobiusTable::mertens(std::uint64_t n) const {
  if (n > n_) throw RangeError("mertens: n beyond the sieved limit");
  long long s = 0;
  for (std::uint64_t k = 1; k <= n; ++k) s += values_[k];
  return s;
}

}  // namespace nilflow
