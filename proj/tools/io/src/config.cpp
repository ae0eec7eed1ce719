#include "nilflow_io/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nilflow/errors.hpp"

namespace nilflow::io {

using nlohmann::json;

Kind parse_kind(const std::string& s) {
  if (s == "cf") return Kind::Cf;
  if (s == "orbit") return Kind::Orbit;
  if (s == "oracle-check") return Kind::OracleCheck;
  if (s == "rigidity-decay") return Kind::RigidityDecay;
  if (s == "correlate") return Kind::Correlate;
  if (s == "complexity") return Kind::Complexity;
  throw ConfigError("unknown experiment kind '" + s + "'");
}

const char* to_string(Kind k) {
  switch (k) {
    case Kind::Cf: return "cf";
    case Kind::Orbit: return "orbit";
    case Kind::OracleCheck: return "oracle-check";
    case Kind::RigidityDecay: return "rigidity-decay";
    case Kind::Correlate: return "correlate";
    case Kind::Complexity: return "complexity";
  }
  return "?";
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ConfigError("format must be csv or json, got '" + s + "'");
}

const char* to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

AlphaSpec parse_alpha_text(const std::string& s) {
  if (s == "golden") return AlphaSpec::golden();
  if (s == "silver") return AlphaSpec::silver();
  try {
    return parse_alpha(s);
  } catch (const InputError& e) {
    throw ConfigError(std::string("system.alpha: ") + e.what());
  }
}

namespace {

long long parse_freq(const std::string& key, const std::string& what) {
  std::size_t used = 0;
  long long m = 0;
  try {
    m = std::stoll(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != key.size() || key.empty()) throw ConfigError(what + ": frequency key '" + key + "' is not an integer");
  return m;
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + ": expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(what + ": not finite");
  return d;
}

cplx complex_value(const json& v, const std::string& what) {
  if (v.is_number()) return {number(v, what), 0.0};
  if (v.is_array() && v.size() == 2) return {number(v[0], what), number(v[1], what)};
  throw ConfigError(what + ": expected a number or [re, im]");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(what + ": unknown field '" + it.key() + "'");
  }
}

}  // namespace

PeriodicFn parse_function(const json& j, const std::string& what) {
  if (j.is_number() && j.get<double>() == 0.0) return PeriodicFn();
  if (!j.is_object()) throw ConfigError(what + ": expected an object or 0");
  check_keys(j, {"trig", "cos", "sin", "mean", "class", "real"}, what);

  cplx mean{0, 0};
  if (j.contains("mean")) mean = complex_value(j["mean"], what + ".mean");
  bool real = !j.contains("trig") && mean.imag() == 0;
  if (j.contains("real")) {
    if (!j["real"].is_boolean()) throw ConfigError(what + ".real: expected a boolean");
    real = j["real"].get<bool>();
  }

  try {
    std::vector<Mode> modes;
    if (j.contains("trig")) {
      if (!j["trig"].is_object()) throw ConfigError(what + ".trig: expected an object");
      for (auto it = j["trig"].begin(); it != j["trig"].end(); ++it)
        modes.push_back({parse_freq(it.key(), what + ".trig"), complex_value(it.value(), what + ".trig")});
    }
    PeriodicFn f = PeriodicFn::make(std::move(modes), mean, std::nullopt, real);
    for (const char* key : {"cos", "sin"}) {
      if (!j.contains(key)) continue;
      if (!j[key].is_object()) throw ConfigError(what + "." + key + ": expected an object");
      for (auto it = j[key].begin(); it != j[key].end(); ++it) {
        long long m = parse_freq(it.key(), what + "." + key);
        double amp = number(it.value(), what + "." + key);
        f = f + (key[0] == 'c' ? PeriodicFn::cos_mode(m, amp) : PeriodicFn::sin_mode(m, amp));
      }
    }
    if (j.contains("class")) {
      const json& c = j["class"];
      if (!c.is_object() || !c.contains("r") || !c.contains("C"))
        throw ConfigError(what + ".class: expected {\"r\": r, \"C\": C}");
      f = f.with_decay(DecayClass{number(c["r"], what + ".class.r"), number(c["C"], what + ".class.C")});
    }
    return f;
  } catch (const InputError& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(j, {"kind", "system", "params", "out", "format", "seed", "threads"}, "config");
  ExperimentConfig c;
  try {
    if (j.contains("kind")) c.kind = parse_kind(j["kind"].get<std::string>());
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("format")) c.format = parse_format(j["format"].get<std::string>());
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) {
      long long t = j["threads"].get<long long>();
      if (t < 1 || t > 1024) throw ConfigError("threads must be in [1, 1024]");
      c.threads = static_cast<unsigned>(t);
    }
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw ConfigError("params: expected an object");
      c.params = j["params"];
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (j.contains("system")) {
    const json& s = j["system"];
    if (!s.is_object()) throw ConfigError("system: expected an object");
    check_keys(s, {"alpha", "depth", "phi", "eta", "psi", "B", "theta", "K"}, "system");
    SystemSpec& sp = c.system;
    try {
      if (s.contains("alpha")) sp.alpha_text = s["alpha"].get<std::string>();
      if (s.contains("depth")) sp.depth = s["depth"].get<int>();
      if (s.contains("B")) sp.B = number(s["B"], "system.B");
      if (s.contains("theta")) sp.theta = number(s["theta"], "system.theta");
      if (s.contains("K")) sp.K = s["K"].get<long long>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("system: ") + e.what());
    }
    sp.alpha = parse_alpha_text(sp.alpha_text);
    if (s.contains("phi")) sp.phi = parse_function(s["phi"], "system.phi");
    if (s.contains("eta")) sp.eta = parse_function(s["eta"], "system.eta");
    if (s.contains("psi")) sp.psi = parse_function(s["psi"], "system.psi");
  }

  const SystemSpec& sp = c.system;
  if (sp.depth < 1 || sp.depth > 2000) throw ConfigError("system.depth must be in [1, 2000]");
  if (!(sp.theta > 0) || !(sp.B > 0)) throw ConfigError("system.B and system.theta must be positive");
  if (sp.K) {
    if (*sp.K < 0) throw ConfigError("system.K must be nonnegative");
    for (const PeriodicFn* f : {&sp.phi, &sp.eta, &sp.psi})
      if (f->max_freq() > *sp.K)
        throw ConfigError("system.K = " + std::to_string(*sp.K) + " is below a stored frequency " +
                          std::to_string(f->max_freq()));
  }
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

SkewSystem build_system(const SystemSpec& s) {
  try {
    RotationNumber a = expand_cf(s.alpha, s.depth);
    return SkewSystem::make(std::move(a), s.phi, s.eta, s.psi, s.B, s.theta);
  } catch (const InputError& e) {
    throw ConfigError(std::string("system: ") + e.what());
  }
}

}  // namespace nilflow::io
