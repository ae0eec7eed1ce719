#include <benchmark/benchmark.h>

#include <random>

#include "nilflow/complexity.hpp"
#include "nilflow/dynamics.hpp"
#include "nilflow/rigidity.hpp"

using namespace nilflow;

namespace {

SkewSystem cos_system() {
  static const RotationNumber a = expand_cf(AlphaSpec::golden(), 40);
  return SkewSystem::make(a, PeriodicFn::cos_mode(1) + PeriodicFn::cos_mode(3, 0.2), PeriodicFn::cos_mode(1),
                          PeriodicFn::sin_mode(1));
}

void BM_ExpandCF(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(expand_cf(AlphaSpec::golden(), static_cast<int>(st.range(0))));
}
BENCHMARK(BM_ExpandCF)->Arg(25)->Arg(100)->Arg(250);

void BM_Step(benchmark::State& st) {
  SkewSystem sys = cos_system();
  PhasePoint p = PhasePoint::make(0.1, HeisElt{0.2, 0.3, 0.1});
  for (auto _ : st) {
    p = step(sys, p);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_Step);

void BM_IterateClosedForm(benchmark::State& st) {
  SkewSystem sys = cos_system();
  PhasePoint p = PhasePoint::make(0.1, HeisElt{0.2, 0.3, 0.1});
  for (auto _ : st) benchmark::DoNotOptimize(iterate(sys, p, st.range(0)));
}
BENCHMARK(BM_IterateClosedForm)->Arg(100)->Arg(1 << 20)->Arg(1LL << 40);

void BM_ExpsumW1(benchmark::State& st) {
  RotationNumber a = expand_cf(AlphaSpec::golden(), 40);
  for (auto _ : st) benchmark::DoNotOptimize(expsum_w1(a, 3, -1, st.range(0)));
}
BENCHMARK(BM_ExpsumW1)->Arg(1000)->Arg(1 << 30);

void BM_Birkhoff(benchmark::State& st) {
  SkewSystem sys = cos_system();
  for (auto _ : st) benchmark::DoNotOptimize(birkhoff(sys, st.range(0)));
}
BENCHMARK(BM_Birkhoff)->Arg(1000)->Arg(1 << 24);

void BM_DistPhase(benchmark::State& st) {
  std::mt19937_64 r(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<PhasePoint> pts;
  for (int i = 0; i < 1024; ++i) pts.push_back(PhasePoint::make(u(r), HeisElt{u(r), u(r), u(r)}));
  std::size_t i = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(dist_phase(pts[i & 1023], pts[(i + 1) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_DistPhase);

void BM_MobiusSieve(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(mobius_sieve(static_cast<std::uint64_t>(st.range(0)), static_cast<unsigned>(st.range(1))));
}
BENCHMARK(BM_MobiusSieve)->Args({1'000'000, 1})->Args({10'000'000, 1})->Args({10'000'000, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_RigidityIntegrals(benchmark::State& st) {
  SkewSystem sys = cos_system();
  for (auto _ : st) benchmark::DoNotOptimize(rigidity_integrals(sys, st.range(0)));
}
BENCHMARK(BM_RigidityIntegrals)->Arg(89)->Arg(17711)->Unit(benchmark::kMillisecond);

void BM_MobiusCorrelation(benchmark::State& st) {
  SkewSystem sys = cos_system();
  const long long N = st.range(0);
  MobiusTable mu = mobius_sieve(static_cast<std::uint64_t>(N));
  Observable f = CharacterObservable{1, 0, 0};
  PhasePoint x0 = PhasePoint::make(0.0, HeisElt{});
  for (auto _ : st)
    benchmark::DoNotOptimize(mobius_correlation(sys, f, x0, N, {N}, mu, static_cast<unsigned>(st.range(1))));
}
BENCHMARK(BM_MobiusCorrelation)->Args({1'000'000, 1})->Args({1'000'000, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_GreedyCover(benchmark::State& st) {
  SkewSystem sys = cos_system();
  auto pts = sample_points(static_cast<std::size_t>(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(greedy_cover(sys, MapChoice::S, 10, 0.2, pts));
}
BENCHMARK(BM_GreedyCover)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
