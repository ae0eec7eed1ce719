#include "nilflow_io/run.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>

#include "nilflow/complexity.hpp"
#include "nilflow/errors.hpp"
#include "nilflow/rigidity.hpp"
#include "oracles.hpp"

namespace nilflow::io {

using nlohmann::json;

namespace {

HeisElt heis_param(const json& p, const char* key) {
  HeisElt g{};
  if (!p.contains(key)) return g;
  const json& o = p.at(key);
  g.x = param<double>(o, "x", 0.0);
  g.y = param<double>(o, "y", 0.0);
  g.z = param<double>(o, "z", 0.0);
  return g;
}

PhasePoint point_param(const json& p, const char* key) {
  double t = p.contains(key) ? param<double>(p.at(key), "t", 0.0) : 0.0;
  return PhasePoint::make(t, heis_param(p, key));
}

long double dist_q_alpha(const RotationNumber& a, const BigInt& q) {
  return std::ldexp(static_cast<long double>(a.dist_fixed512(q)), -512);
}

// ---- cf -------------------------------------------------------------------------

Table run_cf(const ExperimentConfig& c) {
  const int k_max = param<int>(c.params, "k_max", 25);
  if (k_max < 0) throw ConfigError("params.k_max must be >= 0");
  RotationNumber a = expand_cf(c.system.alpha, std::max(k_max, 1));
  Table t;
  t.columns = {"k", "a_k", "l_k", "q_k", "dist_q_alpha", "q_times_dist"};
  for (int k = 0; k <= std::min(k_max, a.depth()); ++k) {
    long double d = dist_q_alpha(a, a.q(k));
    t.rows.push_back({cell(k), k == 0 ? "0" : a.a(k).str(), a.l(k).str(), a.q(k).str(), cell(d),
                      cell(d * a.q_ld(k))});
  }
  return t;
}

// ---- orbit ----------------------------------------------------------------------

Table run_orbit(const ExperimentConfig& c) {
  SkewSystem sys = build_system(c.system);
  const long long n = param<long long>(c.params, "n", 100);
  const long long every = param<long long>(c.params, "every", 1);
  if (n < 0 || every < 1) throw ConfigError("params.n must be >= 0 and params.every >= 1");
  if (n / every > 10'000'000) throw ConfigError("orbit: more than 1e7 rows requested");
  const MapChoice map = parse_map_choice(param<std::string>(c.params, "map", "S"));
  const PhasePoint x0 = point_param(c.params, "x0");
  Table t;
  t.columns = {"j", "t", "x", "y", "z"};
  for (long long j = 0; j <= n; j += every) {
    PhasePoint p = apply_map(sys, map, x0, j);
    const HeisElt& g = p.p.rep();
    t.rows.push_back({cell(j), cell(p.t), cell(static_cast<double>(g.x)), cell(static_cast<double>(g.y)),
                      cell(static_cast<double>(g.z))});
  }
  t.meta["map"] = to_string(map);
  return t;
}

// ---- oracle-check -----------------------------------------------------------------

struct Suite {
  std::string name;
  long long cases = 0;
  double max_err = 0;
  double tol = 0;
  bool pass() const { return max_err <= tol; }
};

double cdist(cplx a, cplx b) { return std::abs(a - b); }

SkewSystem random_system(std::mt19937_64& r, const RotationNumber& a) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> freq(1, 4);
  auto fn = [&] {
    PeriodicFn f = PeriodicFn::cos_mode(freq(r), amp(r));
    return f + PeriodicFn::sin_mode(freq(r), amp(r));
  };
  PeriodicFn phi = fn(), eta = fn(), psi = fn() + PeriodicFn::constant(amp(r));
  return SkewSystem::make(a, phi, eta, psi);
}

std::vector<Suite> oracle_suites(std::uint64_t seed) {
  std::mt19937_64 r(seed);
  std::vector<Suite> out;
  const RotationNumber golden = expand_cf(AlphaSpec::golden(), 40);
  const long double gv = golden.value_ld();

  {
    Suite s{"cf_rational_euclid", 0, 0, 0};
    std::uniform_int_distribution<long long> den(2, 1'000'000);
    for (int i = 0; i < 200; ++i) {
      long long q = den(r);
      long long p = std::uniform_int_distribution<long long>(1, q - 1)(r);
      RotationNumber a = expand_cf(AlphaSpec::from_rational(p, q), 200);
      std::vector<BigInt> ref = oracle::euclid_cf(p, q);
      bool ok = a.depth() == static_cast<int>(ref.size());
      for (int k = 1; ok && k <= a.depth(); ++k) ok = a.a(k) == ref[k - 1];
      s.max_err = std::max(s.max_err, ok ? 0.0 : 1.0);
      ++s.cases;
    }
    out.push_back(s);
  }
  {
    Suite s{"cf_surd_highprec", 0, 0, 0};
    for (const AlphaSpec& spec : {AlphaSpec::golden(), AlphaSpec::silver(), AlphaSpec::from_surd(0, 1, 7, 3),
                                  AlphaSpec::from_surd(-1, 1, 13, 5)}) {
      RotationNumber a = expand_cf(spec, 30);
      auto ref = oracle::cf_quotients(oracle::alpha_hp(spec), 30);
      for (int k = 1; k <= 30; ++k) {
        s.max_err = std::max(s.max_err, a.a(k) == ref[k - 1] ? 0.0 : 1.0);
        ++s.cases;
      }
    }
    out.push_back(s);
  }
  {
    Suite s{"best_approximation", 0, 0, 0};
    auto hp = oracle::alpha_hp(AlphaSpec::golden());
    for (int k = 1; golden.q_u64(k + 1) <= 200'000; ++k) {
      s.max_err = std::max(s.max_err, oracle::best_approx_exhaustive(hp, golden.q_u64(k), golden.q_u64(k + 1)) ? 0.0 : 1.0);
      ++s.cases;
    }
    out.push_back(s);
  }
  {
    Suite s{"mobius_trial_division", 0, 0, 0};
    MobiusTable mu = mobius_sieve(20000);
    for (std::uint64_t n = 1; n <= 20000; ++n, ++s.cases)
      if (mu.mu(n) != oracle::mobius_trial(n)) s.max_err = 1;
    out.push_back(s);
  }
  {
    Suite s{"expsum_closed_forms", 0, 0, 1e-10};
    std::uniform_int_distribution<long long> uv(-6, 6), nn(2, 150);
    for (int i = 0; i < 200; ++i) {
      long long u = uv(r), v = uv(r), n = nn(r);
      if (u == 0) u = 1;
      s.max_err = std::max(s.max_err, cdist(expsum_w0(golden, u, n), oracle::double_sum(gv, u, -u, n)));
      if (v != 0 && u + v != 0) {
        cplx ref = oracle::double_sum(gv, u, v, n);
        s.max_err = std::max(s.max_err, cdist(expsum_w1(golden, u, v, n), ref));
        s.max_err = std::max(s.max_err, cdist(expsum_w2(golden, u, v, n), ref));
      }
      ++s.cases;
    }
    out.push_back(s);
  }
  {
    Suite s{"birkhoff_direct", 0, 0, 1e-9};
    std::uniform_real_distribution<double> tt(0.0, 1.0);
    std::uniform_int_distribution<long long> nn(1, 200);
    for (int i = 0; i < 40; ++i) {
      SkewSystem sys = random_system(r, golden);
      long long n = nn(r);
      BirkhoffSums b = birkhoff(sys, n);
      for (int j = 0; j < 5; ++j, ++s.cases) {
        long double t = tt(r);
        s.max_err = std::max(s.max_err, cdist(b.Phi.eval(t), oracle::birkhoff_direct(sys.phi(), gv, n, t)));
        s.max_err = std::max(s.max_err, cdist(b.H.eval(t), oracle::H_direct(sys.phi(), sys.eta(), gv, n, t)));
      }
    }
    out.push_back(s);
  }
  {
    Suite s{"iterate_vs_steps", 0, 0, 1e-9};
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<long long> nn(0, 300);
    for (int i = 0; i < 200; ++i, ++s.cases) {
      SkewSystem sys = random_system(r, golden);
      PhasePoint p = PhasePoint::make(u01(r), HeisElt{u01(r), u01(r), u01(r) - 0.5});
      long long n = nn(r);
      s.max_err = std::max(s.max_err, dist_phase(iterate(sys, p, n), oracle::repeated_steps(sys, p, n)));
    }
    out.push_back(s);
  }
  {
    Suite s{"dist_window_exhaustive", 0, 0, 1e-12};
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 2000; ++i, ++s.cases) {
      NilPoint p = NilPoint::from(HeisElt{u01(r), u01(r), u01(r)});
      NilPoint q = NilPoint::from(HeisElt{u01(r), u01(r), u01(r)});
      s.max_err = std::max(s.max_err, std::fabs(dist_nil_upper(p, q) - oracle::dist_nil_exhaustive(p, q)));
    }
    out.push_back(s);
  }
  return out;
}

RunResult run_oracle_check(const ExperimentConfig& c) {
  RunResult res;
  Table& t = res.table;
  t.columns = {"suite", "cases", "max_err", "tol", "result"};
  for (const Suite& s : oracle_suites(c.seed)) {
    t.rows.push_back({s.name, cell(s.cases), cell(s.max_err), cell(s.tol), s.pass() ? "PASS" : "FAIL"});
    res.all_passed = res.all_passed && s.pass();
  }
  return res;
}

// ---- rigidity-decay -------------------------------------------------------------

Table run_rigidity_decay(const ExperimentConfig& c) {
  SkewSystem sys = build_system(c.system);
  const int m_lo = param<int>(c.params, "m_lo", 1);
  const int m_hi = param<int>(c.params, "m_hi", std::min(25, sys.alpha().depth() - 1));
  const int grid = param<int>(c.params, "grid", kDefaultGrid);
  const int max_j = param<int>(c.params, "max_j", 4);
  auto rows = decay_experiment(sys, m_lo, m_hi, c.system.theta, grid, max_j, c.threads);
  Table t = table_from_csv(decay_csv(rows));
  t.columns.push_back("sigma_residual");
  for (std::size_t i = 0; i < rows.size(); ++i) t.rows[i].push_back(cell(rows[i].sigma_residual));
  return t;
}

// ---- correlate ------------------------------------------------------------------

Observable observable_param(const json& p) {
  if (!p.contains("observable")) return CharacterObservable{1, 0, 0};
  const json& o = p.at("observable");
  const std::string type = param<std::string>(o, "type", "character");
  if (type == "character")
    return CharacterObservable{param<long long>(o, "m0", 0), param<long long>(o, "m1", 0), param<long long>(o, "m2", 0)};
  if (type == "theta") {
    ThetaObservable th;
    th.m0 = param<long long>(o, "m0", 0);
    th.m1 = param<long long>(o, "m1", 0);
    th.m2 = param<long long>(o, "m2", 0);
    th.m = param<long long>(o, "m", 1);
    th.r = param<double>(o, "r", 0.0);
    std::vector<double> d = param<std::vector<double>>(o, "delta", {0.0, 0.0});
    if (d.size() != 2) throw ConfigError("observable.delta must be [re, im]");
    th.delta = {d[0], d[1]};
    th.eps_trunc = param<double>(o, "eps_trunc", 1e-8);
    return th;
  }
  throw ConfigError("observable.type must be character or theta");
}

Table run_correlate(const ExperimentConfig& c) {
  SkewSystem sys = build_system(c.system);
  const long long N = param<long long>(c.params, "N", 1'000'000);
  if (N < 1 || N > 2'000'000'000LL) throw ConfigError("params.N must be in [1, 2e9]");
  std::vector<long long> cps = param<std::vector<long long>>(c.params, "checkpoints", {});
  if (cps.empty()) {
    for (long long p = 1000; p < N; p *= 10) cps.push_back(p);
    cps.push_back(N);
  }
  Observable f = observable_param(c.params);
  try {
    validate_observable(f);
  } catch (const InputError& e) {
    throw ConfigError(std::string("params.observable: ") + e.what());
  }
  MobiusTable mu = mobius_sieve(static_cast<std::uint64_t>(N), c.threads);
  CorrelationReport rep = mobius_correlation(sys, f, point_param(c.params, "x0"), N, cps, mu, c.threads);
  Table t = table_from_csv(correlation_csv(rep));
  t.meta["observable"] = rep.observable;
  t.meta["sup_f"] = rep.sup_f;
  return t;
}

// ---- complexity -----------------------------------------------------------------

Table run_complexity(const ExperimentConfig& c) {
  const std::string mode = param<std::string>(c.params, "mode", "subpoly");
  Table t;
  if (mode == "subpoly") {
    RotationNumber a = expand_cf(c.system.alpha, c.system.depth);
    auto ks = param<std::vector<int>>(c.params, "ks", {4, 8, 12, 16});
    SubpolyVerdict v = subpoly_trend(a, ks, param<double>(c.params, "eps", 0.01), param<double>(c.params, "L", 200.0),
                                     param<double>(c.params, "tau", 0.5));
    t = table_from_csv(subpoly_csv(v));
    t.meta["decreasing"] = v.decreasing;
  } else if (mode == "cover") {
    SkewSystem sys = build_system(c.system);
    const MapChoice map = parse_map_choice(param<std::string>(c.params, "map", "S"));
    const auto ns = param<std::vector<long long>>(c.params, "ns", {1, 10, 100});
    const double eps = param<double>(c.params, "eps", 0.2);
    const auto samples = param<std::size_t>(c.params, "samples", 500);
    const long long max_centers = param<long long>(c.params, "max_centers", -1);
    auto pts = sample_points(samples, c.seed);
    t.columns = {"n", "map", "eps", "samples", "s_n_upper", "covered_fraction", "budget_exhausted"};
    for (long long n : ns) {
      CoverResult r = greedy_cover(sys, map, n, eps, pts, max_centers, c.threads);
      t.rows.push_back({cell(n), to_string(map), cell(eps), cell(static_cast<unsigned long long>(r.samples)),
                        cell(r.s_n_upper), cell(r.covered_fraction), cell(r.budget_exhausted)});
    }
  } else if (mode == "adjacency") {
    SkewSystem sys = build_system(c.system);
    AdjacencyReport r = adjacency_check(sys, param<double>(c.params, "eps", 0.5), param<double>(c.params, "L", 4.0),
                                        param<int>(c.params, "k", 3), param<long long>(c.params, "pairs", 100),
                                        c.seed, c.threads);
    t.columns = {"k", "q_k", "n_k", "eps", "L", "pairs", "violations", "max_dbar", "exploratory", "dbar_sampled"};
    t.rows.push_back({cell(r.k), cell(static_cast<unsigned long long>(r.q_k)), cell(r.n_k), cell(r.eps), cell(r.L),
                      cell(r.pairs), cell(r.violations), cell(r.max_dbar), cell(r.exploratory),
                      cell(r.dbar_sampled)});
  } else {
    throw ConfigError("params.mode must be subpoly, cover or adjacency");
  }
  t.meta["mode"] = mode;
  return t;
}

std::string error_class(int code) {
  switch (code) {
    case kConfig: return "config";
    case kNumeric: return "numeric";
    case kIo: return "io";
    default: return "internal";
  }
}

void report(std::ostream& err, int code, const std::string& msg) {
  json j;
  j["error"] = error_class(code);
  j["message"] = msg;
  err << j.dump() << "\n";
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  RunResult res;
  switch (cfg.kind) {
    case Kind::Cf: res.table = run_cf(cfg); break;
    case Kind::Orbit: res.table = run_orbit(cfg); break;
    case Kind::OracleCheck: res = run_oracle_check(cfg); break;
    case Kind::RigidityDecay: res.table = run_rigidity_decay(cfg); break;
    case Kind::Correlate: res.table = run_correlate(cfg); break;
    case Kind::Complexity: res.table = run_complexity(cfg); break;
  }
  nlohmann::ordered_json meta;
  meta["kind"] = to_string(cfg.kind);
  meta["alpha"] = cfg.system.alpha_text;
  meta["seed"] = cfg.seed;
  meta["threads"] = cfg.threads;
  for (auto it = res.table.meta.begin(); it != res.table.meta.end(); ++it) meta[it.key()] = it.value();
  res.table.meta = std::move(meta);
  return res;
}

int exit_code_for_current_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ConfigError& e) {
    report(err, kConfig, e.what());
    return kConfig;
  } catch (const InputError& e) {
    report(err, kConfig, e.what());
    return kConfig;
  } catch (const json::exception& e) {
    report(err, kConfig, e.what());
    return kConfig;
  } catch (const IoError& e) {
    report(err, kIo, e.what());
    return kIo;
  } catch (const NumericError& e) {
    report(err, kNumeric, e.what());
    return kNumeric;
  } catch (const std::exception& e) {
    report(err, kFailed, e.what());
    return kFailed;
  }
}

int run_and_write(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    RunResult res = run_experiment(cfg);
    std::string text = render(res.table, cfg.format);
    if (cfg.out.empty())
      out << text;
    else
      write_atomic(cfg.out, text);
    if (!res.all_passed) {
      report(err, kNumeric, "oracle-check: at least one suite failed");
      return kNumeric;
    }
    return kOk;
  } catch (...) {
    return exit_code_for_current_exception(err);
  }
}

}  // namespace nilflow::io
