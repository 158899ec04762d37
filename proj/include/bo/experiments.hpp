#pragma once

#include <atomic>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bo/config.hpp"
#include "bo/trajectory.hpp"

namespace bo {

using Json = nlohmann::ordered_json;

/// measured <relation> threshold, relation one of "<", "<=", ">=", "==".
/// A NaN measurement fails.
struct Check {
  std::string name;
  double measured;
  std::string relation;
  double threshold;
  bool pass;
};

struct PlotSeries {
  std::string name;  // file stem
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;
};

struct Evaluation {
  Json summary = Json::object();
  std::vector<Check> checks;
  std::vector<PlotSeries> plots;
  bool passed() const;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<Json> records;  // sorted by sample_index
  Evaluation evaluation;
  std::optional<Trajectory> trajectory;  // simulate keeps its first sample
  double wall_seconds = 0.0;
  bool passed() const { return evaluation.passed(); }
};

/// Draws the ensemble, runs every sample (concurrently when n_threads != 1;
/// 0 means hardware concurrency) and evaluates the records. A blow-up is
/// recorded on its sample; configuration problems throw ConfigError.
ExperimentReport run_experiment(const ExperimentConfig& cfg, unsigned n_threads = 0);

/// Summary statistics, checks and plot series, recomputed from records alone.
Evaluation evaluate(const ExperimentConfig& cfg, const std::vector<Json>& records);

Json config_echo(const ExperimentConfig& cfg);
/// summary.json body: config echo, statistics, checks and verdict. Wall time
/// is kept out so that repeated runs serialize identically.
std::string summary_text(const ExperimentReport& r);
/// records.jsonl body: one JSON object per line.
std::string records_text(const ExperimentReport& r);
std::vector<Json> parse_records(const std::string& jsonl);

/// Writes summary.json, records.jsonl, timing.json, one <series>.dat per plot
/// and, for simulate, trajectory.bosp.
void write_report(const ExperimentReport& r, const std::filesystem::path& dir);

/// runs/<name>-<UTC timestamp>-<seed>
std::filesystem::path default_output_dir(const ExperimentConfig& cfg);

/// fn(i) for i in [0, n) on up to n_threads workers. The first exception by
/// index is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, unsigned n_threads, Fn&& fn) {
  if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
  n_threads = unsigned(std::min<std::size_t>(n_threads, n));
  std::vector<std::exception_ptr> errors(n);
  auto body = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) body(i);
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace bo
