#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bo/config.hpp"
#include "bo/errors.hpp"
#include "bo/experiments.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

void print_report(const bo::ExperimentReport& r, const std::filesystem::path& dir) {
  std::cout << bo::to_string(r.config.name) << ": " << r.records.size() << " records, "
            << (r.passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& c : r.evaluation.checks) {
    std::printf("  %-4s %-32s %.6g %s %.6g\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.measured,
                c.relation.c_str(), c.threshold);
  }
  std::cout << "  wall time " << r.wall_seconds << " s, output in " << dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benjamin-Ono pseudospectral experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  bool quiet = false;
  unsigned threads = 0;
  // Solver overrides map onto config keys; unset ones leave the file/defaults alone.
  const std::vector<std::tuple<std::string, std::string, std::string>> flags{
      {"--seed", "seed", "64-bit run seed"},
      {"--lambda", "lambda", "period parameter (period 2 pi lambda)"},
      {"--n", "n_points", "grid points"},
      {"--k", "k", "nonlinearity power"},
      {"--dt", "dt", "time step"},
      {"--t-final", "t_final", "final time"},
      {"--scheme", "scheme", "ifrk4 | etdrk4"},
      {"--dealias", "dealias", "two-thirds | pad4 | none"},
  };
  std::map<std::string, std::string> flag_values;
  app.add_option("--config", config_path, "INI-style config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (default runs/<name>-<time>-<seed>)");
  app.add_flag("--quiet", quiet, "print nothing on success");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  for (const auto& [flag, key, help] : flags) app.add_option(flag, flag_values[key], help);

  for (bo::ExperimentName name : bo::all_experiments())
    app.add_subcommand(bo::to_string(name), "run the " + bo::to_string(name) + " experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  bo::ExperimentConfig cfg;
  try {
    const bo::ExperimentName name = bo::parse_experiment_name(app.get_subcommands().front()->get_name());
    cfg = bo::default_config(name);
    if (!config_path.empty()) bo::apply_config_file(cfg, config_path);
    for (const auto& [flag, key, help] : flags)
      if (app.count(flag) > 0) bo::set_config_value(cfg, key, flag_values[key]);
    bo::validate(cfg);
  } catch (const bo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const bo::ExperimentReport report = bo::run_experiment(cfg, threads);
    const std::filesystem::path dir = out_dir.empty() ? bo::default_output_dir(cfg) : std::filesystem::path(out_dir);
    bo::write_report(report, dir);
    if (!quiet || !report.passed()) print_report(report, dir);
    return report.passed() ? kExitPass : kExitFail;
  } catch (const bo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bo::PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bo::ParameterError& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
