#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "nilflow_io/config.hpp"
#include "nilflow_io/run.hpp"

namespace io = nilflow::io;

int main(int argc, char** argv) {
  CLI::App app{"nilflow: experiments on a skew product over the Heisenberg nilmanifold"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  std::optional<std::string> format;
  app.add_option("--config", config_path, "JSON experiment config");
  app.add_option("--seed", seed, "RNG seed (overrides the config)");
  app.add_option("--threads", threads, "worker threads (overrides the config)")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", out, "output path, written atomically; default stdout");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  const std::pair<const char*, const char*> kinds[] = {
      {"cf", "continued fraction table for system.alpha"},
      {"orbit", "orbit of params.x0 under S, T1 or tildeT1"},
      {"oracle-check", "compare closed forms against brute-force references"},
      {"rigidity-decay", "rigidity integrals along Q'' denominators"},
      {"correlate", "Mobius correlation partial sums"},
      {"complexity", "subpoly table, greedy covers or grid adjacency"},
  };
  for (const auto& [name, help] : kinds) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : io::kConfig;
  }

  const std::string kind = app.get_subcommands().front()->get_name();
  io::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = io::load_config_file(config_path);
    auto k = io::parse_kind(kind);
    if (!config_path.empty() && cfg.kind != k) {
      // A config written for another kind is almost certainly a mistake, unless
      // it did not name a kind at all.
      auto raw = nlohmann::json::parse(std::ifstream(config_path), nullptr, true, true);
      if (raw.contains("kind"))
        throw io::ConfigError("config kind '" + raw["kind"].get<std::string>() + "' does not match subcommand '" +
                              kind + "'");
    }
    cfg.kind = k;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (out) cfg.out = *out;
    if (format) cfg.format = io::parse_format(*format);
  } catch (...) {
    return io::exit_code_for_current_exception(std::cerr);
  }
  return io::run_and_write(cfg, std::cout, std::cerr);
}
