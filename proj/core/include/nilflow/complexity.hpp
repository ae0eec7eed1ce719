#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nilflow/dynamics.hpp"

namespace nilflow {

enum class MapChoice { S, T1, TildeT1 };

MapChoice parse_map_choice(const std::string& s);
const char* to_string(MapChoice m);

// T^j u for the chosen map, by closed form.
PhasePoint apply_map(const SkewSystem& sys, MapChoice map, const PhasePoint& u, long long j);

// Orbit u, T u, ..., T^{n-1} u. When n exceeds `max_terms`, a deterministic
// stratified subset of max_terms indices is used instead (one per stratum).
struct Trajectory {
  long long n = 0;
  std::vector<long long> times;
  std::vector<PhasePoint> points;
  bool sampled() const { return static_cast<long long>(times.size()) < n; }
};
inline constexpr long long kDbarExactTerms = 4096;
Trajectory trajectory(const SkewSystem& sys, MapChoice map, const PhasePoint& u, long long n,
                      long long max_terms = kDbarExactTerms);

// (1/n) sum_{j<n} dist_phase(T^j u, T^j v). Both trajectories must share times.
double dbar(const Trajectory& a, const Trajectory& b, int window = kDefaultWindow);
double dbar(const SkewSystem& sys, const PhasePoint& u, const PhasePoint& v, long long n, MapChoice map,
            int window = kDefaultWindow);

// ---- grid ---------------------------------------------------------------------

struct GridIndex {
  std::uint64_t j = 0, j1 = 0, j2 = 0, j3 = 0;
};

class GridStream {
 public:
  // Throws InputError unless eps > 0, L > 1/eps, q >= 1; CapacityError if
  // the point count exceeds 64 bits.
  GridStream(double eps, double L, std::uint64_t q_k);

  std::uint64_t time_steps() const { return nt_; }   // j ranges over [0, nt)
  std::uint64_t space_steps() const { return ns_; }  // j1, j2, j3 range over [0, ns)
  std::uint64_t count() const { return count_; }
  // eps^-1 q^5 L^4 as a long double, and whether it equals count() exactly.
  long double formula() const;
  bool formula_exact() const { return formula() == static_cast<long double>(count_); }

  GridIndex index(std::uint64_t flat) const;
  std::uint64_t flat(const GridIndex& g) const;
  PhasePoint point(const GridIndex& g) const;
  PhasePoint point(std::uint64_t flat) const { return point(index(flat)); }

  // Calls f(point) for every flat index in [lo, hi).
  template <class F>
  void for_each(std::uint64_t lo, std::uint64_t hi, F&& f) const {
    for (std::uint64_t i = lo; i < hi && i < count_; ++i) f(point(i));
  }

  double eps() const { return eps_; }
  double L() const { return L_; }
  std::uint64_t q() const { return q_; }
  double dt() const;  // eps / (q^2 L)
  double dx() const;  // 1 / (q L)

 private:
  double eps_, L_;
  std::uint64_t q_;
  std::uint64_t nt_ = 0, ns_ = 0, count_ = 0;
};

// L = max(2 / eps, 4 (1 + sup|phi+| + sup|eta+|) C_margin).
inline constexpr double kLMargin = 10.0;
double default_L(const SkewSystem& sys, double eps);

struct AdjacencyReport {
  int k = 0;
  std::uint64_t q_k = 0;
  long long n_k = 0;
  double eps = 0, L = 0;
  bool exploratory = false;  // q_k is not a member of Q_B
  bool dbar_sampled = false;
  long long pairs = 0;
  long long violations = 0;
  double max_dbar = 0;
  std::vector<std::pair<GridIndex, GridIndex>> violating;  // first few
};

// Random grid points paired with a neighbour differing by at most one step
// in each coordinate; checks dbar_{n_k} < eps under T1.
AdjacencyReport adjacency_check(const SkewSystem& sys, double eps, double L, int k, long long pairs,
                                std::uint64_t seed, unsigned threads = 1,
                                long long max_terms = kDbarExactTerms);

// ---- covering -----------------------------------------------------------------

// Uniform on [0, 1) x fundamental domain [0,1)^2 x (-1/2, 1/2].
std::vector<PhasePoint> sample_points(std::size_t count, std::uint64_t seed);

struct CoverResult {
  long long n = 0;
  double eps = 0;
  std::size_t samples = 0;
  long long s_n_upper = 0;
  double covered_fraction = 0;
  bool budget_exhausted = false;
  std::vector<std::size_t> centers;
};

CoverResult greedy_cover(const SkewSystem& sys, MapChoice map, long long n, double eps,
                         const std::vector<PhasePoint>& samples, long long max_centers = -1,
                         unsigned threads = 1);
CoverResult greedy_cover(const SkewSystem& sys, MapChoice map, long long n, double eps, std::size_t sample_size,
                         std::uint64_t seed, long long max_centers = -1, unsigned threads = 1);

struct ComplexityReport {
  double epsilon = 0, L = 0;
  int k = 0;
  long long n = 0;
  std::uint64_t grid_count = 0;
  double covered_fraction = 0;
  long long s_n_upper = 0;
};

struct SubpolyRow {
  int k = 0;
  std::uint64_t q_k = 0;
  long double n_k = 0;         // q_k^(B-1)
  long double grid_count = 0;  // eps^-1 q_k^5 L^4
  long double s_n_upper = 0;   // the grid count bounds s_n
  long double ratio = 0;       // s_n_upper / n_k^tau
  double tau = 0, B = 0;
};

struct SubpolyVerdict {
  std::vector<SubpolyRow> rows;
  bool decreasing = false;
  // ratio * q_k, constant when the ratio is proportional to 1/q_k
  std::vector<long double> ratio_times_q;
};

// B = 6 / tau + 1. Needs at least three k.
SubpolyVerdict subpoly_trend(const RotationNumber& alpha, const std::vector<int>& ks, double eps, double L,
                             double tau);

std::string subpoly_csv(const SubpolyVerdict& v);

}  // namespace nilflow
