#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bo/evolution.hpp"
#include "bo/gauge.hpp"

namespace bo {

enum class ExperimentName {
  simulate,
  conservation,
  gauge_residual,
  strichartz_scan,
  flowmap,
  scaling,
  convergence,
  estimate_monitor,
  bernstein,
  gauge_lipschitz,
};

std::string to_string(ExperimentName name);
ExperimentName parse_experiment_name(const std::string& s);
const std::vector<ExperimentName>& all_experiments();

/// Every experiment reads the subset of keys it needs; all keys are valid in
/// every section. Defaults depend on the experiment (see default_config).
struct ExperimentConfig {
  ExperimentName name = ExperimentName::simulate;

  // grid
  double lambda = 1.0;
  int n_points = 128;
  int points_per_unit = 32;  // n_points = points_per_unit * lambda for lambda scans

  // solver
  Equation equation = Equation::gbo;
  int k = 1;
  double dt = 1e-3;
  double t_final = 1.0;
  Scheme scheme = Scheme::if_rk4;
  Dealias dealias = Dealias::pad4;
  int sample_stride = 10;

  // ensemble
  std::uint64_t seed = 0;
  int n_samples = 1;
  double amplitude = 0.1;
  int n_modes = 16;
  double decay = 0.7;
  double mean = 0.0;
  std::vector<double> gammas{0.0, 0.5};
  std::vector<double> lambdas{1.0, 2.0, 4.0, 8.0, 16.0};
  GaugeVariant variant = GaugeVariant::gbo;
  double shrink_amplitude = 1.0;  // gauge-residual: H^2 size of the doubling study
  double perturbation = 1e-3;  // flowmap ||phi1 - phi2||_{H^1}
  double shrink = 100.0;       // flowmap perturbation reduction factor
  double dilation = 2.0;
  int n_levels = 5;
  double rel_tol = 1e-6;  // Strichartz time quadrature

  // thresholds
  double max_residual = 1e-9;
  double min_shrink = 100.0;
  double drift_tol = 1e-10;
  double invariant_tol = 1e-6;
  double min_separation = 1e-2;
  double max_spread = 2.0;
  double max_slope = 0.1;
  double max_ratio = 10.0;
  double max_ratio_change = 2.0;
  double h1_radius = 0.3;
  double mean_tol = 1e-13;
  double order_min = 3.8;
  double order_max = 4.2;
  double bo_tol = 1e-8;
  double gbo_tol = 1e-7;
  double identity_tol = 1e-11;

  SolverConfig solver() const;
};

ExperimentConfig default_config(ExperimentName name);

/// Names of all recognized keys, in echo order.
const std::vector<std::string>& config_keys();

/// Throws ConfigError on an unknown key or a malformed value.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::string get_config_value(const ExperimentConfig& cfg, const std::string& key);

/// INI-style text: "key = value" lines under "[experiment-name]" headers,
/// '#' or ';' comments. Keys before any header apply to every experiment;
/// the section matching cfg.name is applied after them. Other sections are
/// validated but ignored.
void apply_config_text(ExperimentConfig& cfg, const std::string& text);
void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);

/// Throws ConfigError when parameters are inconsistent.
void validate(const ExperimentConfig& cfg);

}  // namespace bo
