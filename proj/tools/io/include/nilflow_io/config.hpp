#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "nilflow/dynamics.hpp"
#include "nilflow/periodic.hpp"

namespace nilflow::io {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { Cf, Orbit, OracleCheck, RigidityDecay, Correlate, Complexity };
enum class Format { Csv, Json };

Kind parse_kind(const std::string& s);
const char* to_string(Kind k);
Format parse_format(const std::string& s);
const char* to_string(Format f);

// "golden", "silver", or anything parse_alpha accepts.
AlphaSpec parse_alpha_text(const std::string& s);

// A function is a JSON object with any of
//   "trig":  {"m": [re, im], ...}   coefficients of e(m t)
//   "cos":   {"m": amp, ...}        amp cos(2 pi m t)
//   "sin":   {"m": amp, ...}
//   "mean":  number or [re, im]
//   "class": {"r": r, "C": C}       decay certificate, checked on load
//   "real":  bool                   default: true unless "trig" or a complex mean is present
// The literal 0 is accepted for the zero function.
PeriodicFn parse_function(const nlohmann::json& j, const std::string& what);

struct SystemSpec {
  std::string alpha_text = "golden";
  AlphaSpec alpha = AlphaSpec::golden();
  int depth = 40;
  PeriodicFn phi, eta, psi;
  double B = kDefaultB;
  double theta = kDefaultTheta;
  std::optional<long long> K;  // spectrum cutoff; every |m| must be <= K
};

struct ExperimentConfig {
  Kind kind = Kind::Cf;
  SystemSpec system;
  nlohmann::json params = nlohmann::json::object();
  std::string out;  // empty: stdout
  Format format = Format::Csv;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

// Validates everything that can be checked without running. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

// Expands alpha to system.depth and builds the system (throws ConfigError on
// anything the core library rejects).
SkewSystem build_system(const SystemSpec& s);

// Typed access to ExperimentConfig::params with a default; wrong types are ConfigErrors.
template <class T>
T param(const nlohmann::json& params, const char* key, T fallback) {
  if (!params.contains(key)) return fallback;
  try {
    return params.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("params.") + key + ": wrong type");
  }
}

}  // namespace nilflow::io
