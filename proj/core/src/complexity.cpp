#include "nilflow/complexity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

#include "nilflow/errors.hpp"

namespace nilflow {

MapChoice parse_map_choice(const std::string& s) {
  if (s == "S") return MapChoice::S;
  if (s == "T1") return MapChoice::T1;
  if (s == "tildeT1" || s == "TildeT1") return MapChoice::TildeT1;
  throw InputError("unknown map choice '" + s + "' (S, T1, tildeT1)");
}

const char* to_string(MapChoice m) {
  switch (m) {
    case MapChoice::S: return "S";
    case MapChoice::T1: return "T1";
    case MapChoice::TildeT1: return "tildeT1";
  }
  return "?";
}

PhasePoint apply_map(const SkewSystem& sys, MapChoice map, const PhasePoint& u, long long j) {
  switch (map) {
    case MapChoice::S: return iterate(sys, u, j);
    case MapChoice::T1: return iterate_T1(sys, u, j);
    case MapChoice::TildeT1: return tilde_T1_iterate(sys, u, j);
  }
  throw InputError("apply_map: bad map choice");
}

namespace {

std::vector<long long> orbit_times(long long n, long long max_terms) {
  if (n < 1) throw InputError("dbar: n must be >= 1");
  if (max_terms < 1) throw InputError("dbar: max_terms must be >= 1");
  std::vector<long long> times;
  if (n <= max_terms) {
    times.resize(static_cast<std::size_t>(n));
    for (long long j = 0; j < n; ++j) times[static_cast<std::size_t>(j)] = j;
    return times;
  }
  // midpoint of each of max_terms equal strata
  for (long long i = 0; i < max_terms; ++i) {
    long double x = (static_cast<long double>(i) + 0.5L) * static_cast<long double>(n) / max_terms;
    times.push_back(std::min(n - 1, static_cast<long long>(x)));
  }
  return times;
}

// The Birkhoff sums at each orbit time do not depend on the base point, so
// they are computed once and shared by every trajectory.
class OrbitCache {
 public:
  OrbitCache(const SkewSystem& sys, MapChoice map, std::vector<long long> times)
      : sys_(&sys), map_(map), times_(std::move(times)) {
    if (map_ == MapChoice::TildeT1) {
      if (!sys.finite_QB_regime()) throw InputError("tilde T1 needs the finite-Q_B regime (M1 = {0} on the spectra)");
      return;
    }
    gen_ = map_ == MapChoice::T1 ? &sys.conjugated() : &sys;
    if (!gen_->is_real()) throw InputError("orbits need real-valued phi, eta, psi");
    sums_.reserve(times_.size());
    for (long long j : times_) sums_.push_back(birkhoff(*gen_, j));
  }

  const std::vector<long long>& times() const { return times_; }

  PhasePoint at(std::size_t i, const PhasePoint& u) const {
    const long long j = times_[i];
    if (map_ == MapChoice::TildeT1) return tilde_T1_iterate(*sys_, u, j);
    if (j == 0) return u;
    const BirkhoffSums& bs = sums_[i];
    const long double t = u.t;
    HeisElt Y{bs.xi.eval(t).real(), bs.Phi.eval(t).real(), bs.Psi(t).real()};
    long double tn = t + gen_->alpha().frac_mul(static_cast<i128>(j));
    tn -= std::floor(tn);
    double td = static_cast<double>(tn);
    if (td >= 1.0) td = 0.0;
    return {td, u.p.right_mul(Y)};
  }

  Trajectory trajectory(long long n, const PhasePoint& u) const {
    Trajectory tr;
    tr.n = n;
    tr.times = times_;
    tr.points.reserve(times_.size());
    for (std::size_t i = 0; i < times_.size(); ++i) tr.points.push_back(at(i, u));
    return tr;
  }

 private:
  const SkewSystem* sys_;
  const SkewSystem* gen_ = nullptr;
  MapChoice map_;
  std::vector<long long> times_;
  std::vector<BirkhoffSums> sums_;
};

template <class F>
void parallel_for(long long count, unsigned threads, F&& body) {
  unsigned nt = std::max(1u, threads);
  if (nt == 1 || count < 2) {
    for (long long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(nt);
  for (unsigned w = 0; w < nt; ++w)
    pool.emplace_back([&, w]() {
      try {
        for (long long i; (i = next.fetch_add(1)) < count;) body(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Trajectory trajectory(const SkewSystem& sys, MapChoice map, const PhasePoint& u, long long n, long long max_terms) {
  OrbitCache cache(sys, map, orbit_times(n, max_terms));
  return cache.trajectory(n, u);
}

double dbar(const Trajectory& a, const Trajectory& b, int window) {
  if (a.times != b.times) throw InputError("dbar: trajectories sampled at different times");
  if (a.points.empty()) throw InputError("dbar: empty trajectory");
  long double s = 0;
  for (std::size_t i = 0; i < a.points.size(); ++i) s += dist_phase(a.points[i], b.points[i], window);
  return static_cast<double>(s / static_cast<long double>(a.points.size()));
}

double dbar(const SkewSystem& sys, const PhasePoint& u, const PhasePoint& v, long long n, MapChoice map, int window) {
  OrbitCache cache(sys, map, orbit_times(n, kDbarExactTerms));
  return dbar(cache.trajectory(n, u), cache.trajectory(n, v), window);
}

// ---- grid ---------------------------------------------------------------------------

GridStream::GridStream(double eps, double L, std::uint64_t q_k) : eps_(eps), L_(L), q_(q_k) {
  if (!(eps > 0) || !std::isfinite(eps)) throw InputError("grid: eps must be positive");
  if (!(L > 1 / eps) || !std::isfinite(L)) throw InputError("grid: L must exceed 1/eps");
  if (q_k < 1) throw InputError("grid: q_k must be >= 1");
  const long double q = static_cast<long double>(q_k);
  // j in [0, q^2 L / eps - 1], j_i in [0, q L - 1]
  const long double tsteps = std::floor(q * q * L / eps + 1e-9L);
  const long double ssteps = std::floor(q * L + 1e-9L);
  const long double total = tsteps * ssteps * ssteps * ssteps;
  if (!(total < 1.8446744073709552e19L) || tsteps < 1 || ssteps < 1)
    throw CapacityError("grid: point count does not fit in 64 bits");
  nt_ = static_cast<std::uint64_t>(tsteps);
  ns_ = static_cast<std::uint64_t>(ssteps);
  u128 c = static_cast<u128>(nt_) * ns_ * ns_;
  c *= ns_;
  if (c >> 64) throw CapacityError("grid: point count does not fit in 64 bits");
  count_ = static_cast<std::uint64_t>(c);
}

long double GridStream::formula() const {
  const long double q = static_cast<long double>(q_), L = L_;
  return q * q * q * q * q * L * L * L * L / static_cast<long double>(eps_);
}

double GridStream::dt() const { return eps_ / (static_cast<double>(q_) * static_cast<double>(q_) * L_); }
double GridStream::dx() const { return 1.0 / (static_cast<double>(q_) * L_); }

GridIndex GridStream::index(std::uint64_t flat) const {
  if (flat >= count_) throw RangeError("grid: flat index out of range");
  GridIndex g;
  g.j3 = flat % ns_;
  flat /= ns_;
  g.j2 = flat % ns_;
  flat /= ns_;
  g.j1 = flat % ns_;
  g.j = flat / ns_;
  return g;
}

std::uint64_t GridStream::flat(const GridIndex& g) const {
  if (g.j >= nt_ || g.j1 >= ns_ || g.j2 >= ns_ || g.j3 >= ns_) throw RangeError("grid: index out of range");
  return ((g.j * ns_ + g.j1) * ns_ + g.j2) * ns_ + g.j3;
}

PhasePoint GridStream::point(const GridIndex& g) const {
  const double dx = this->dx();
  // (1 j2/(qL) j3/(qL); 1 j1/(qL); 1)
  HeisElt h{static_cast<double>(g.j1) * dx, static_cast<double>(g.j2) * dx, static_cast<double>(g.j3) * dx};
  return PhasePoint::make(static_cast<double>(g.j) * dt(), h);
}

double default_L(const SkewSystem& sys, double eps) {
  if (!(eps > 0)) throw InputError("default_L: eps must be positive");
  const double sup = sys.split_phi().plus.sup_bound() + sys.split_eta().plus.sup_bound();
  return std::max(2 / eps, 4 * (1 + sup) * kLMargin);
}

AdjacencyReport adjacency_check(const SkewSystem& sys, double eps, double L, int k, long long pairs,
                                std::uint64_t seed, unsigned threads, long long max_terms) {
  const RotationNumber& a = sys.alpha();
  if (k < 0 || k > a.depth()) throw RangeError("adjacency_check: k outside the expansion");
  if (pairs < 1) throw InputError("adjacency_check: need at least one pair");
  const BigInt& qb = a.q(k);
  if (qb > BigInt(1'000'000'000)) throw CapacityError("adjacency_check: q_k too large for the grid");
  AdjacencyReport rep;
  rep.k = k;
  rep.q_k = static_cast<std::uint64_t>(qb);
  rep.eps = eps;
  rep.L = L;
  const long double nk = std::pow(static_cast<long double>(rep.q_k), static_cast<long double>(sys.B() - 1));
  if (!(nk < 9.2e18L)) throw CapacityError("adjacency_check: n_k = q_k^(B-1) overflows");
  rep.n_k = std::max<long long>(1, static_cast<long long>(std::floor(nk)));
  const auto& res = sys.sets().resonant;
  rep.exploratory = !(static_cast<std::size_t>(k) < res.size() && res[static_cast<std::size_t>(k)]);
  GridStream grid(eps, L, rep.q_k);
  OrbitCache cache(sys, MapChoice::T1, orbit_times(rep.n_k, max_terms));
  rep.dbar_sampled = static_cast<long long>(cache.times().size()) < rep.n_k;

  std::vector<double> d(static_cast<std::size_t>(pairs));
  std::vector<std::pair<GridIndex, GridIndex>> idx(static_cast<std::size_t>(pairs));
  parallel_for(pairs, threads, [&](long long i) {
    std::mt19937_64 rng(splitmix(seed ^ splitmix(static_cast<std::uint64_t>(i))));
    auto pick = [&](std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); };
    auto step = [&](std::uint64_t v, std::uint64_t n) { return std::min<std::uint64_t>(v + (rng() & 1), n - 1); };
    GridIndex g{pick(grid.time_steps()), pick(grid.space_steps()), pick(grid.space_steps()), pick(grid.space_steps())};
    GridIndex h{step(g.j, grid.time_steps()), step(g.j1, grid.space_steps()), step(g.j2, grid.space_steps()),
                step(g.j3, grid.space_steps())};
    idx[static_cast<std::size_t>(i)] = {g, h};
    d[static_cast<std::size_t>(i)] =
        dbar(cache.trajectory(rep.n_k, grid.point(g)), cache.trajectory(rep.n_k, grid.point(h)));
  });
  rep.pairs = pairs;
  for (std::size_t i = 0; i < d.size(); ++i) {
    rep.max_dbar = std::max(rep.max_dbar, d[i]);
    if (!(d[i] < eps)) {
      ++rep.violations;
      if (rep.violating.size() < 16) rep.violating.push_back(idx[i]);
    }
  }
  return rep;
}

// ---- covering ----------------------------------------------------------------------

std::vector<PhasePoint> sample_points(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<PhasePoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double t = U(rng), x = U(rng), y = U(rng), z = 0.5 - U(rng);
    out.push_back(PhasePoint::make(t, HeisElt{x, y, z}));
  }
  return out;
}

inline constexpr std::size_t kMaxCoverSamples = 20000;

CoverResult greedy_cover(const SkewSystem& sys, MapChoice map, long long n, double eps,
                         const std::vector<PhasePoint>& samples, long long max_centers, unsigned threads) {
  if (!(eps > 0 && eps < 1)) throw InputError("greedy_cover: eps must lie in (0, 1)");
  if (samples.empty()) throw InputError("greedy_cover: no samples");
  if (samples.size() > kMaxCoverSamples) throw CapacityError("greedy_cover: too many samples");
  const std::size_t S = samples.size();
  OrbitCache cache(sys, map, orbit_times(n, kDbarExactTerms));
  std::vector<Trajectory> tr(S);
  parallel_for(static_cast<long long>(S), threads,
               [&](long long i) { tr[static_cast<std::size_t>(i)] = cache.trajectory(n, samples[static_cast<std::size_t>(i)]); });
  std::vector<std::uint8_t> near(S * S, 0);
  parallel_for(static_cast<long long>(S), threads, [&](long long ii) {
    const auto i = static_cast<std::size_t>(ii);
    near[i * S + i] = 1;
    for (std::size_t j = i + 1; j < S; ++j) {
      // order fixed by index so the matrix is symmetric bit for bit
      std::uint8_t b = dbar(tr[i], tr[j]) < eps ? 1 : 0;
      near[i * S + j] = b;
    }
  });
  for (std::size_t i = 0; i < S; ++i)
    for (std::size_t j = i + 1; j < S; ++j) near[j * S + i] = near[i * S + j];

  CoverResult res;
  res.n = n;
  res.eps = eps;
  res.samples = S;
  std::vector<std::uint8_t> covered(S, 0);
  std::size_t ncov = 0;
  const double target = 1 - eps;
  while (static_cast<double>(ncov) / static_cast<double>(S) <= target) {
    if (max_centers >= 0 && static_cast<long long>(res.centers.size()) >= max_centers) {
      res.budget_exhausted = true;
      break;
    }
    std::size_t best = 0, gain_best = 0;
    for (std::size_t c = 0; c < S; ++c) {
      std::size_t gain = 0;
      const std::uint8_t* row = &near[c * S];
      for (std::size_t j = 0; j < S; ++j) gain += row[j] & static_cast<std::uint8_t>(!covered[j]);
      if (gain > gain_best) {
        gain_best = gain;
        best = c;
      }
    }
    if (gain_best == 0) break;
    res.centers.push_back(best);
    for (std::size_t j = 0; j < S; ++j)
      if (near[best * S + j] && !covered[j]) {
        covered[j] = 1;
        ++ncov;
      }
  }
  res.s_n_upper = static_cast<long long>(res.centers.size());
  res.covered_fraction = static_cast<double>(ncov) / static_cast<double>(S);
  return res;
}

CoverResult greedy_cover(const SkewSystem& sys, MapChoice map, long long n, double eps, std::size_t sample_size,
                         std::uint64_t seed, long long max_centers, unsigned threads) {
  return greedy_cover(sys, map, n, eps, sample_points(sample_size, seed), max_centers, threads);
}

// ---- sub-polynomial trend ---------------------------------------------------------

SubpolyVerdict subpoly_trend(const RotationNumber& alpha, const std::vector<int>& ks, double eps, double L,
                             double tau) {
  if (ks.size() < 3) throw InputError("subpoly_trend: needs at least three values of k");
  if (!(tau > 0)) throw InputError("subpoly_trend: tau must be positive");
  if (!(eps > 0) || !(L > 1 / eps)) throw InputError("subpoly_trend: needs eps > 0 and L > 1/eps");
  const double B = 6 / tau + 1;
  SubpolyVerdict v;
  for (int k : ks) {
    if (k < 0 || k > alpha.depth()) throw RangeError("subpoly_trend: k outside the expansion");
    SubpolyRow r;
    r.k = k;
    r.q_k = alpha.q_u64(k);
    const long double q = alpha.q_ld(k);
    r.n_k = std::pow(q, static_cast<long double>(B - 1));
    r.grid_count = std::pow(q, 5.0L) * std::pow(static_cast<long double>(L), 4.0L) / eps;
    r.s_n_upper = r.grid_count;
    // n_k^tau = q^((B-1) tau), computed in the exponent to stay finite
    r.ratio = r.grid_count / std::pow(q, static_cast<long double>((B - 1) * tau));
    r.tau = tau;
    r.B = B;
    v.rows.push_back(r);
    v.ratio_times_q.push_back(r.ratio * q);
  }
  v.decreasing = true;
  for (std::size_t i = 1; i < v.rows.size(); ++i)
    if (!(v.rows[i].ratio < v.rows[i - 1].ratio)) v.decreasing = false;
  return v;
}

std::string subpoly_csv(const SubpolyVerdict& v) {
  std::string out = "k,q_k,n_k,grid_count,s_n_upper,ratio,tau,B\n";
  char buf[256];
  for (const auto& r : v.rows) {
    std::snprintf(buf, sizeof buf, "%d,%llu,%.17Lg,%.17Lg,%.17Lg,%.17Lg,%.17g,%.17g\n", r.k,
                  static_cast<unsigned long long>(r.q_k), r.n_k, r.grid_count, r.s_n_upper, r.ratio, r.tau, r.B);
    out += buf;
  }
  return out;
}

}  // namespace nilflow
