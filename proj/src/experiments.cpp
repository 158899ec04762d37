#include "bo/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "bo/checkpoint.hpp"
#include "bo/errors.hpp"
#include "bo/gauge.hpp"
#include "bo/invariants.hpp"
#include "bo/linear_group.hpp"
#include "bo/random_field.hpp"
#include "bo/spectral.hpp"

namespace bo {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---- record helpers --------------------------------------------------------

double num(const Json& r, const char* key) {
  const auto it = r.find(key);
  if (it == r.end() || !it->is_number()) return kNaN;
  return it->get<double>();
}

bool flag(const Json& r, const char* key) {
  const auto it = r.find(key);
  return it != r.end() && it->is_boolean() && it->get<bool>();
}

std::vector<double> numbers(const Json& r, const char* key) {
  std::vector<double> out;
  const auto it = r.find(key);
  if (it == r.end() || !it->is_array()) return out;
  for (const auto& x : *it) out.push_back(x.is_number() ? x.get<double>() : kNaN);
  return out;
}

// max/min that propagate NaN, so a non-finite measurement can never pass.
double nan_max(double a, double b) { return (std::isnan(a) || std::isnan(b)) ? kNaN : std::max(a, b); }
double nan_min(double a, double b) { return (std::isnan(a) || std::isnan(b)) ? kNaN : std::min(a, b); }

template <class Pred>
double max_of(const std::vector<Json>& recs, const char* key, Pred keep) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : recs)
    if (keep(r)) m = nan_max(m, num(r, key));
  return m;
}

double max_of(const std::vector<Json>& recs, const char* key) {
  return max_of(recs, key, [](const Json&) { return true; });
}

double count_if(const std::vector<Json>& recs, const char* key) {
  double n = 0;
  for (const auto& r : recs) n += flag(r, key) ? 1 : 0;
  return n;
}

Check check(std::string name, double measured, std::string relation, double threshold) {
  bool pass = false;
  if (!std::isnan(measured)) {
    if (relation == "<") pass = measured < threshold;
    else if (relation == "<=") pass = measured <= threshold;
    else if (relation == ">=") pass = measured >= threshold;
    else if (relation == "==") pass = measured == threshold;
    else throw ParameterError("unknown check relation " + relation);
  }
  return {std::move(name), measured, std::move(relation), threshold, pass};
}

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Json vec(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

// ---- ensemble helpers ------------------------------------------------------

Rng rng_for(const ExperimentConfig& cfg, std::size_t index) { return Rng(sample_seed(cfg.seed, index)); }

RandomFieldSpec field_spec(const ExperimentConfig& cfg, Norm norm, double value, double mean = 0.0) {
  RandomFieldSpec s;
  s.n_modes = cfg.n_modes;
  s.decay = cfg.decay;
  s.norm = norm;
  s.norm_value = value;
  s.mean = mean;
  return s;
}

SpectralField cos_mode(const PeriodicGrid& g, int m, double a) {
  return SpectralField::from_modes(g, {{m, a / 2}, {-m, a / 2}}, true);
}

SpectralField sin_mode(const PeriodicGrid& g, int m, double a) {
  return SpectralField::from_modes(g, {{m, Complex(0, -a / 2)}, {-m, Complex(0, a / 2)}}, true);
}

int points_for(const ExperimentConfig& cfg, double lambda) {
  const int n = int(std::ceil(cfg.points_per_unit * lambda / 2.0)) * 2;
  return std::max(n, 8);
}

using Producer = std::vector<Json> (*)(const ExperimentConfig&, unsigned, std::optional<Trajectory>&);

std::vector<Json> indexed(std::size_t n, unsigned threads, const std::function<Json(std::size_t)>& make) {
  std::vector<Json> out(n);
  parallel_for(n, threads, [&](std::size_t i) {
    Json r = Json::object();
    r["sample_index"] = i;
    const Json made = make(i);
    for (const auto& [k, v] : made.items()) r[k] = v;
    out[i] = std::move(r);
  });
  return out;
}

void record_blow_up(Json& r, const BlowUpError& e) {
  r["blow_up"] = true;
  r["t_reached"] = e.last_good_time();
}

// ---- simulate --------------------------------------------------------------

std::vector<Json> produce_simulate(const ExperimentConfig& cfg, unsigned threads, std::optional<Trajectory>& keep) {
  std::vector<std::optional<Trajectory>> first(1);
  auto recs = indexed(std::size_t(cfg.n_samples), threads, [&](std::size_t i) {
    Rng rng = rng_for(cfg, i);
    const PeriodicGrid g(cfg.lambda, cfg.n_points);
    const SpectralField u0 = random_field(g, field_spec(cfg, Norm::hs(1), cfg.amplitude, cfg.mean), rng);
    Json r;
    r["h1_initial"] = norm(u0, Norm::hs(1));
    try {
      Trajectory traj = solve(u0, cfg.solver());
      r["blow_up"] = false;
      r["t_reached"] = traj.t_final();
      for (const auto& s : drift_report(traj).series) r["drift_" + s.name] = s.drift;
      const AprioriCheck a = h1_apriori_check(traj);
      r["h1_ratio"] = a.degenerate ? kNaN : a.max_ratio;
      r["h1_final"] = norm(traj.back(), Norm::hs(1));
      if (i == 0) {
        std::vector<double> h1;
        for (const auto& u : traj.snapshots()) h1.push_back(norm(u, Norm::hs(1)));
        r["times"] = vec(traj.times());
        r["h1"] = vec(h1);
        first[0] = std::move(traj);
      }
    } catch (const BlowUpError& e) {
      record_blow_up(r, e);
    }
    return r;
  });
  keep = std::move(first[0]);
  return recs;
}

Evaluation evaluate_simulate(const ExperimentConfig& cfg, const std::vector<Json>& recs) {
  Evaluation ev;
  ev.summary["max_drift_M"] = max_of(recs, "drift_M", [](const Json& r) { return !flag(r, "blow_up"); });
  ev.summary["max_h1_ratio"] = max_of(recs, "h1_ratio", [](const Json& r) { return !flag(r, "blow_up"); });
  ev.checks.push_back(check("blow_ups", count_if(recs, "blow_up"), "==", 0));
  ev.checks.push_back(check("max_drift_M", ev.summary["max_drift_M"].get<double>(), "<", cfg.invariant_tol));
  if (!recs.empty()) {
    const auto t = numbers(recs.front(), "times"), h = numbers(recs.front(), "h1");
    PlotSeries p{"h1_vs_time", "t", "H1 norm", {}};
    for (std::size_t i = 0; i < t.size() && i < h.size(); ++i) p.points.emplace_back(t[i], h[i]);
    ev.plots.push_back(std::move(p));
  }
  return ev;
}

// ---- conservation ----------------------------------------------------------

std::vector<Json> produce_conservation(const ExperimentConfig& cfg, unsigned, std::optional<Trajectory>&) {
  const PeriodicGrid g(cfg.lambda, cfg.n_points);
  const SpectralField u0 = cos_mode(g, 1, cfg.amplitude);
  SolverConfig sc = cfg.solver();
  sc.equation = Equation::gbo;
  const Trajectory traj = solve(u0, sc);
  const InvariantReport rep = drift_report(traj);

  std::vector<Json> recs;
  Json ref;
  ref["sample_index"] = 0;
  ref["kind"] = "reference";
  ref["k"] = cfg.k;
  for (const auto& s : rep.series) ref["drift_" + s.name] = s.drift;
  ref["times"] = vec(rep.times);
  if (cfg.k >= 2) {
    std::vector<double> opposite;
    for (const auto& u : traj.snapshots()) opposite.push_back(invariant(u, Invariant::E_gbo(cfg.k, +1)));
    ref["drift_E_opposite"] = relative_drift(opposite);
    ref["E"] = vec(rep.at("E").values);
  } else {
    ref["F"] = vec(rep.at("F").values);
  }
  recs.push_back(std::move(ref));

  if (cfg.k == 1) {
    const FboCalibration cal = calibrate_fbo(traj, sc);
    for (const auto& c : cal.candidates) {
      Json r;
      r["sample_index"] = recs.size();
      r["kind"] = "candidate";
      r["convention"] = to_string(c.convention);
      r["cubic_sign"] = c.signs.cubic;
      r["quartic_sign"] = c.signs.quartic;
      r["drift"] = c.drift;
      recs.push_back(std::move(r));
    }
  }
  return recs;
}

Evaluation evaluate_conservation(const ExperimentConfig& cfg, const std::vector<Json>& recs) {
  Evaluation ev;
  const Json* ref = nullptr;
  std::vector<const Json*> cands;
  for (const auto& r : recs) {
    if (r.value("kind", "") == "reference") ref = &r;
    if (r.value("kind", "") == "candidate") cands.push_back(&r);
  }
  if (!ref) throw ParameterError("conservation records have no reference run");
  ev.checks.push_back(check("drift_I", num(*ref, "drift_I"), "<", cfg.drift_tol));
  ev.checks.push_back(check("drift_M", num(*ref, "drift_M"), "<", cfg.drift_tol));
  const auto times = numbers(*ref, "times");
  if (!cands.empty()) {
    const Json* best = *std::min_element(cands.begin(), cands.end(), [](const Json* a, const Json* b) {
      return num(*a, "drift") < num(*b, "drift");
    });
    double opposite = kNaN;
    for (const Json* c : cands)
      if (c->at("convention") == best->at("convention") && c->at("cubic_sign") == -best->at("cubic_sign").get<int>() &&
          c->at("quartic_sign") == best->at("quartic_sign"))
        opposite = num(*c, "drift");
    ev.summary["selected_convention"] = best->at("convention");
    ev.summary["selected_cubic_sign"] = best->at("cubic_sign");
    ev.summary["selected_quartic_sign"] = best->at("quartic_sign");
    ev.summary["selected_drift"] = num(*best, "drift");
    ev.summary["opposite_cubic_drift"] = opposite;
    ev.checks.push_back(check("drift_F_selected", num(*best, "drift"), "<", cfg.invariant_tol));
    ev.checks.push_back(check("drift_F_opposite_sign", opposite, ">=", cfg.min_separation));
    const auto F = numbers(*ref, "F");
    PlotSeries p{"F_vs_time", "t", "F", {}};
    for (std::size_t i = 0; i < times.size() && i < F.size(); ++i) p.points.emplace_back(times[i], F[i]);
    ev.plots.push_back(std::move(p));
  } else {
    ev.summary["drift_E_opposite"] = num(*ref, "drift_E_opposite");
    ev.checks.push_back(check("drift_E", num(*ref, "drift_E"), "<", cfg.invariant_tol));
    const auto E = numbers(*ref, "E");
    PlotSeries p{"E_vs_time", "t", "E", {}};
    for (std::size_t i = 0; i < times.size() && i < E.size(); ++i) p.points.emplace_back(times[i], E[i]);
    ev.plots.push_back(std::move(p));
  }
  return ev;
}

// ---- gauge-residual --------------------------------------------------------

std::vector<Json> produce_gauge_residual(const ExperimentConfig& cfg, unsigned threads, std::optional<Trajectory>&) {
  const int k = cfg.variant == GaugeVariant::bo ? 1 : cfg.k;
  return indexed(std::size_t(cfg.n_samples), threads, [&](std::size_t i) {
    Rng rng = rng_for(cfg, i);
    const PeriodicGrid g(cfg.lambda, cfg.n_points);
    const SpectralField v = random_field(g, field_spec(cfg, Norm::hs(2), cfg.amplitude), rng);
    const ResidualNorms fine = gauge_residual(v, cfg.variant, k);
    // Doubling study on the same direction at a larger amplitude: at small
    // amplitude the high-k terms sit at round-off on both grids.
    const SpectralField vs = (cfg.shrink_amplitude / cfg.amplitude) * v;
    const double shrink_fine = gauge_residual(vs, cfg.variant, k).l2;
    const double shrink_coarse = gauge_residual(resample(vs, cfg.n_points / 2), cfg.variant, k).l2;
    Json r;
    r["h2_norm"] = norm(v, Norm::hs(2));
    r["residual_l2"] = fine.l2;
    r["residual_h1"] = fine.h1;
    r["doubling_fine_l2"] = shrink_fine;
    r["doubling_coarse_l2"] = shrink_coarse;
    r["shrink"] = shrink_coarse / shrink_fine;
    if (cfg.variant == GaugeVariant::bo) {
      const GaugeState gs = build_gauge(v, GaugeVariant::bo);
      r["phase_mean"] = std::abs(multiply(gs.phase, v).mean());
      r["reconstruction_error"] = norm(reconstruct_u(gs, v) - v, Norm::l2());
      r["phase_unit_defect"] = phase_unit_defect(gs);
    }
    return r;
  });
}

Evaluation evaluate_gauge_residual(const ExperimentConfig& cfg, const std::vector<Json>& recs) {
  Evaluation ev;
  double min_shrink = std::numeric_limits<double>::infinity();
  for (const auto& r : recs) min_shrink = nan_min(min_shrink, num(r, "shrink"));
  ev.summary["max_residual_l2"] = max_of(recs, "residual_l2");
  ev.summary["max_residual_h1"] = max_of(recs, "residual_h1");
  ev.summary["max_doubling_fine_l2"] = max_of(recs, "doubling_fine_l2");
  ev.summary["max_h2_norm"] = max_of(recs, "h2_norm");
  ev.summary["min_shrink"] = min_shrink;
  ev.checks.push_back(check("max_residual_l2", max_of(recs, "residual_l2"), "<=", cfg.max_residual));
  ev.checks.push_back(check("max_h2_norm", max_of(recs, "h2_norm"), "<=", cfg.amplitude * (1 + 1e-12)));
  ev.checks.push_back(check("min_shrink_on_doubling", min_shrink, ">=", cfg.min_shrink));
  if (cfg.variant == GaugeVariant::bo) {
    ev.checks.push_back(check("max_phase_mean", max_of(recs, "phase_mean"), "<", cfg.identity_tol));
    ev.checks.push_back(
        check("max_reconstruction_error", max_of(recs, "reconstruction_error"), "<", cfg.identity_tol));
  }
  PlotSeries p{"residual_by_sample", "sample", "L2 residual", {}};
  for (const auto& r : recs) p.points.emplace_back(num(r, "sample_index"), num(r, "residual_l2"));
  ev.plots.push_back(std::move(p));
  return ev;
}

// ---- lambda scans ----------------------------------------------------------

struct LambdaMaxima {
  std::vector<double> lambdas;
  std::vector<double> maxima;
};

LambdaMaxima per_lambda_max(const ExperimentConfig& cfg, const std::vector<Json>& recs, const char* key) {
  LambdaMaxima out;
  for (double lam : cfg.lambdas) {
    out.lambdas.push_back(lam);
    out.maxima.push_back(max_of(recs, key, [&](const Json& r) { return num(r, "lambda") == lam; }));
  }
  return out;
}

double spread(const std::vector<double>& v) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double x : v) {
    lo = nan_min(lo, x);
    hi = nan_max(hi, x);
  }
  return hi / lo;
}

double count_nonfinite(const std::vector<Json>& recs, const char* key) {
  double n = 0;
  for (const auto& r : recs) n += std::isfinite(num(r, key)) ? 0 : 1;
  return n;
}

void add_lambda_plot(Evaluation& ev, const std::string& name, const std::string& y, const LambdaMaxima& m) {
  PlotSeries p{name, "lambda", y, {}};
  for (std::size_t i = 0; i < m.lambdas.size(); ++i) p.points.emplace_back(m.lambdas[i], m.maxima[i]);
  ev.plots.push_back(std::move(p));
  Json per = Json::array();
  for (std::size_t i = 0; i < m.lambdas.size(); ++i) per.push_back({{"lambda", m.lambdas[i]}, {"max", m.maxima[i]}});
  ev.summary["per_lambda"] = per;
}

std::vector<Json> produce_strichartz(const ExperimentConfig& cfg, unsigned threads, std::optional<Trajectory>&) {
  const std::size_t n = std::size_t(cfg.n_samples);
  return indexed(n * cfg.lambdas.size(), threads, [&](std::size_t i) {
    const double lam = cfg.lambdas[i / n];
    Rng rng = rng_for(cfg, i);
    const PeriodicGrid g(lam, points_for(cfg, lam));
    const SpectralField phi = random_wave_packet(g, WavePacketSpec{}, rng);
    const StrichartzEstimate est = strichartz_norm_converged(phi, cfg.t_final, cfg.rel_tol);
    Json r;
    r["lambda"] = lam;
    r["n_points"] = g.size();
    r["l2_norm"] = norm(phi, Norm::l2());
    r["strichartz"] = est.value;
    r["n_t"] = est.n_t;
    r["converged"] = est.converged;
    return r;
  });
}

Evaluation evaluate_strichartz(const ExperimentConfig& cfg, const std::vector<Json>& recs) {
  Evaluation ev;
  const LambdaMaxima m = per_lambda_max(cfg, recs, "strichartz");
  const double s = spread(m.maxima);
  const double slope = m.lambdas.size() >= 2 ? loglog_slope(m.lambdas, m.maxima) : 0.0;
  double unconverged = 0;
  for (const auto& r : recs) unconverged += flag(r, "converged") ? 0 : 1;
  add_lambda_plot(ev, "strichartz_max_vs_lambda", "max Strichartz norm", m);
  ev.summary["spread"] = s;
  ev.summary["loglog_slope"] = slope;
  ev.checks.push_back(check("spread_across_lambda", s, "<", cfg.max_spread));
  ev.checks.push_back(check("loglog_slope", slope, "<", cfg.max_slope));
  ev.checks.push_back(check("unconverged_quadratures", unconverged, "==", 0));
  return ev;
}

std::vector<Json> produce_bernstein(const ExperimentConfig& cfg, unsigned threads, std::optional<Trajectory>&) {
  const std::size_t n = std::size_t(cfg.n_samples);
  return indexed(n * cfg.lambdas.size(), threads, [&](std::size_t i) {
    const double lam = cfg.lambdas[i / n];
    Rng rng = rng_for(cfg, i);
    const PeriodicGrid g(lam, points_for(cfg, lam));
    RandomFieldSpec spec = field_spec(cfg, Norm::l2(), 1.0);
    spec.physical_frequency = true;
    const SpectralField f = random_field(g, spec, rng);
    const double high = norm(project(f, Projection::gt(1.0)), Norm::linf());
    const double grad = norm(differentiate(f, Derivative::d_dx(1)), Norm::linf());
    Json r;
    r["lambda"] = lam;
    r["high_sup"] = high;
    r["gradient_sup"] = grad;
    r["ratio"] = high / grad;
    r["below_one"] = high / grad <= 1.0 + 1e-9;
    return r;
  });
}

Evaluation evaluate_bernstein(const ExperimentConfig& cfg, const std::vector<Json>& recs) {
  Evaluation ev;
  const LambdaMaxima m = per_lambda_max(cfg, recs, "ratio");
  add_lambda_plot(ev, "bernstein_max_vs_lambda", "max ratio", m);
  ev.summary["max_ratio"] = max_of(recs, "ratio");
  ev.summary["samples_above_one"] = double(recs.size()) - count_if(recs, "below_one");
  ev.summary["spread"] = spread(m.maxima);
  ev.checks.push_back(check("nonfinite_ratios", count_nonfinite(recs, "ratio"), "==", 0));
  ev.checks.push_back(check("spread_across_lambda", spread(m.maxima), "<", cfg.max_spread));
  return ev;
}

std::vector<Json> produce_gauge_lipschitz(const ExperimentConfig& cfg, unsigned threads, std::optional<Trajectory>&) {
  const std::size_t n = std::size_t(cfg.n_samples);
  return indexed(n * cfg.lambdas.size(), threads, [&](std::size_t i) {
    const double lam = cfg.lambdas[i / n];
    Rng rng = rng_for(cfg, i);
    const PeriodicGrid g(lam, cfg.n_points);
    const RandomFieldSpec spec = field_spec(cfg, Norm::l2(), cfg.amplitude);
    const SpectralField phi1 = random_field(g, spec, rng);
    const SpectralField phi2 = random_field(g, spec, rng);
    const LipschitzGap gap = gauge_lipschitz_gap(phi1, phi2, cfg.variant, cfg.k);
    Json r;
    r["lambda"] = lam;
    r["gap"] = gap.gap;
    r["bound_ratio"] = gap.bound_ratio;
    r["degenerate"] = gap.degenerate;
    return r;
  });
}

Evaluation evaluate_gauge_lipschitz(const ExperimentConfig& cfg, const std::vector<Json>& recs) {
  Evaluation ev;
  const LambdaMaxima m = per_lambda_max(cfg, recs, "bound_ratio");
  add_lambda_plot(ev, "gauge_lipschitz_max_vs_lambda", "max bound ratio", m);
  ev.summary["spread"] = spread(m.maxima);
  ev.summary["degenerate_pairs"] = count_if(recs, "degenerate");
  ev.checks.push_back(check("nonfinite_ratios", count_nonfinite(recs, "bound_ratio"), "==", 0));
  ev.checks.push_back(check("spread_across_lambda", spread(m.maxima), "<", cfg.max_spread));
  return ev;
}

// ---- flowmap ---------------------------------------------------------------

double sup_h1_distance(const Trajectory& a, const Trajectory& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, norm(a[i] - b[i], Norm::hs(1)));
  return worst;
}

std::vector<Json> produce_flowmap(const ExperimentConfig& cfg, unsigned threads, std::optional<Trajectory>&) {
  const std::size_t n = std::size_t(cfg.n_samples);
  return indexed(n * cfg.gammas.size(), threads, [&](std::size_t i) {
    const double gamma = cfg.gammas[i / n];
    Rng rng = rng_for(cfg, i);
    const PeriodicGrid g(cfg.lambda, cfg.n_points);
    const SpectralField f1 = random_field(g, field_spec(cfg, Norm::hs(1), cfg.amplitude), rng);
    const SpectralField delta = random_field(g, field_spec(cfg, Norm::hs(1), cfg.perturbation), rng);
    const SpectralField phi1 = f1 + SpectralField::constant(g, gamma);
    const SpectralField phi2 = phi1 + delta;
    const SpectralField phi2s = phi1 + (1.0 / cfg.shrink) * delta;
    Json r;
    r["gamma"] = gamma;
    r["mean_1"] = phi1.mean().real();
    r["mean_2"] = phi2.mean().real();
    r["mean_defect"] = std::max(std::abs(phi1.mean().real() - gamma), std::abs(phi2.mean().real() - gamma));
    r["h1_fluctuation_1"] = norm(fluctuation(phi1), Norm::hs(1));
    r["h1_fluctuation_2"] = norm(fluctuation(phi2), Norm::hs(1));
    const double d = norm(phi1 - phi2, Norm::hs(1));
    const double ds = norm(phi1 - phi2s, Norm::hs(1));
    r["initial_distance"] = d;
    r["initial_distance_shrunk"] = ds;
    r["degenerate"] = d == 0.0;
    r["blow_up"] = false;
    if (d == 0.0) return r;
    try {
      const SolverConfig sc = cfg.solver();
      const Trajectory u1 = solve(phi1, sc), u2 = solve(phi2, sc), u2s = solve(phi2s, sc);
      r["ratio"] = sup_h1_distance(u1, u2) / d;
      r["ratio_shrunk"] = sup_h1_distance(u1, u2s) / ds;
    } catch (const BlowUpError& e) {
      record_blow_up(r, e);
    }
    return r;
  });
}

Evaluation evaluate_flowmap(const ExperimentConfig& cfg, const std::vector<Json>& recs) {
  Evaluation ev;
  auto usable = [](const Json& r) { return !flag(r, "degenerate") && !flag(r, "blow_up"); };
  double n_usable = 0;
  for (const auto& r : recs) n_usable += usable(r) ? 1 : 0;
  double change = 1.0;
  Json per = Json::array();
  for (double gamma : cfg.gammas) {
    auto sel = [&](const Json& r) { return usable(r) && num(r, "gamma") == gamma; };
    const double a = max_of(recs, "ratio", sel), b = max_of(recs, "ratio_shrunk", sel);
    if (std::isfinite(a) || std::isfinite(b)) change = nan_max(change, std::max(a / b, b / a));
    per.push_back({{"gamma", gamma}, {"max_ratio", a}, {"max_ratio_shrunk", b}});
    PlotSeries p{"ratios_gamma_" + std::to_string(int(std::lround(gamma * 1000))), "sample", "H1 Lipschitz ratio", {}};
    for (const auto& r : recs)
      if (sel(r)) p.points.emplace_back(num(r, "sample_index"), num(r, "ratio"));
    ev.plots.push_back(std::move(p));
  }
  const double max_h1 = std::max(max_of(recs, "h1_fluctuation_1"), max_of(recs, "h1_fluctuation_2"));
  ev.summary["usable_pairs"] = n_usable;
  ev.summary["per_gamma"] = per;
  ev.summary["max_ratio"] = max_of(recs, "ratio", usable);
  ev.summary["max_ratio_change"] = change;
  ev.checks.push_back(check("usable_pairs", n_usable, ">=", 1));
  ev.checks.push_back(check("blow_ups", count_if(recs, "blow_up"), "==", 0));
  ev.checks.push_back(check("max_mean_defect", max_of(recs, "mean_defect"), "<=", cfg.mean_tol));
  ev.checks.push_back(check("max_h1_fluctuation", max_h1, "<=", cfg.h1_radius));
  if (n_usable > 0) {
    ev.checks.push_back(check("max_ratio", max_of(recs, "ratio", usable), "<=", cfg.max_ratio));
    ev.checks.push_back(check("max_ratio_change_on_shrink", change, "<", cfg.max_ratio_change));
  }
  return ev;
}

// ---- scaling ---------------------------------------------------------------

std::vector<Json> produce_scaling(const ExperimentConfig& cfg, unsigned threads, std::optional<Trajectory>&) {
  struct Fixture {
    const char* name;
    DilationVariant variant;
    int k;
  };
  const std::vector<Fixture> fixtures{{"bo", DilationVariant::bo, 1}, {"gbo", DilationVariant::gbo, cfg.k}};
  return indexed(fixtures.size(), threads, [&](std::size_t i) {
    const Fixture& fx = fixtures[i];
    const double lam = cfg.dilation;
    const PeriodicGrid g(1.0, cfg.n_points);
    const SpectralField u0 = cos_mode(g, 1, cfg.amplitude);
    SolverConfig sc = cfg.solver();
    sc.equation = Equation::gbo;
    sc.k = fx.k;
    sc.sample_stride = int(std::lround(sc.t_final / sc.dt));
    SolverConfig sd = sc;
    sd.t_final = lam * lam * sc.t_final;
    sd.sample_stride = int(std::lround(sd.t_final / sd.dt));
    Json r;
    r["fixture"] = fx.name;
    r["k"] = fx.k;
    r["dilation"] = lam;
    try {
      const SpectralField a = dilate(solve(u0, sc).back(), lam, fx.variant, fx.k);
      const SpectralField b = solve(dilate(u0, lam, fx.variant, fx.k), sd).back();
      r["h1_discrepancy"] = norm(a - b, Norm::hs(1));
      r["blow_up"] = false;
    } catch (const BlowUpError& e) {
      record_blow_up(r, e);
    }
    // L^2 under dilation: lambda^{1/2 - 1/k} ||u0||.
    const double expect = std::pow(lam, 0.5 - 1.0 / fx.k) * norm(u0, Norm::l2());
    r["l2_scaling_error"] = std::abs(norm(dilate(u0, lam, fx.variant, fx.k), Norm::l2()) / expect - 1.0);
    return r;
  });
}

Evaluation evaluate_scaling(const ExperimentConfig& cfg, const std::vector<Json>& recs) {
  Evaluation ev;
  for (const auto& r : recs) {
    const std::string fx = r.value("fixture", "");
    const double tol = fx == "bo" ? cfg.bo_tol : cfg.gbo_tol;
    ev.summary[fx + "_h1_discrepancy"] = num(r, "h1_discrepancy");
    ev.checks.push_back(check(fx + "_h1_discrepancy", num(r, "h1_discrepancy"), "<", tol));
    ev.checks.push_back(check(fx + "_l2_scaling_error", num(r, "l2_scaling_error"), "<", cfg.identity_tol));
  }
  return ev;
}

// ---- convergence -----------------------------------------------------------

std::vector<Json> produce_convergence(const ExperimentConfig& cfg, unsigned threads, std::optional<Trajectory>&) {
  struct Fixture {
    const char* name;
    Equation eq;
    int k;
  };
  const std::vector<Fixture> fixtures{
      {"linear", Equation::linear, 1}, {"gbo1", Equation::gbo, 1}, {"gbo3", Equation::gbo, 3}};
  return indexed(fixtures.size(), threads, [&](std::size_t i) {
    const Fixture& fx = fixtures[i];
    const PeriodicGrid g(cfg.lambda, cfg.n_points);
    // 0.1 cos x for linear and gbo(1); 0.05 (cos x + sin 2x) for gbo(3)
    const SpectralField u0 = fx.k == 3 ? cos_mode(g, 1, 0.05) + sin_mode(g, 2, 0.05)
                                       : cos_mode(g, 1, 0.1) + (fx.eq == Equation::linear ? sin_mode(g, 2, 0.05)
                                                                                         : SpectralField::zero(g));
    SolverConfig sc = cfg.solver();
    sc.equation = fx.eq;
    sc.k = fx.k;
    const ConvergenceResult c = convergence_order(u0, sc, cfg.n_levels);
    Json r;
    r["fixture"] = fx.name;
    r["order"] = c.order;
    r["exact"] = c.exact;
    r["dts"] = vec(c.dts);
    r["errors"] = vec(c.errors);
    return r;
  });
}

Evaluation evaluate_convergence(const ExperimentConfig& cfg, const std::vector<Json>& recs) {
  Evaluation ev;
  for (const auto& r : recs) {
    const std::string fx = r.value("fixture", "");
    ev.summary[fx + "_order"] = num(r, "order");
    if (fx == "linear") {
      ev.checks.push_back(check("linear_exact", flag(r, "exact") ? 1 : 0, "==", 1));
    } else {
      ev.checks.push_back(check(fx + "_order_min", num(r, "order"), ">=", cfg.order_min));
      ev.checks.push_back(check(fx + "_order_max", num(r, "order"), "<=", cfg.order_max));
    }
    const auto dts = numbers(r, "dts"), errs = numbers(r, "errors");
    PlotSeries p{"error_vs_dt_" + fx, "dt", "L2 error", {}};
    for (std::size_t i = 0; i < dts.size() && i < errs.size(); ++i) p.points.emplace_back(dts[i], errs[i]);
    ev.plots.push_back(std::move(p));
  }
  return ev;
}

// ---- estimate-monitor ------------------------------------------------------

std::vector<Json> produce_estimate_monitor(const ExperimentConfig& cfg, unsigned threads, std::optional<Trajectory>&) {
  return indexed(std::size_t(cfg.n_samples), threads, [&](std::size_t i) {
    Rng rng = rng_for(cfg, i);
    const PeriodicGrid g(cfg.lambda, cfg.n_points);
    const SpectralField v0 = random_field(g, field_spec(cfg, Norm::hs(1), cfg.amplitude), rng);
    SolverConfig sc = cfg.solver();
    sc.equation = Equation::renormalized_gbo;
    Json r;
    r["blow_up"] = false;
    try {
      const Trajectory v = solve(v0, sc);
      std::vector<SpectralField> ws;
      double excess = -std::numeric_limits<double>::infinity();
      for (const auto& s : v.snapshots()) {
        ws.push_back(build_gauge(s, GaugeVariant::gbo, cfg.k).w);
        excess = std::max(excess, norm(ws.back(), Norm::l2()) - norm(s, Norm::l2()));
      }
      const Trajectory w(v.times(), ws, v.tag());
      const double xw = xnorm(w, 1), xv = xnorm(v, 1);
      const int k = cfg.k;
      const double denom = norm(ws.front(), Norm::hs(1)) +
                           std::pow(cfg.t_final, 0.25) *
                               (std::pow(xv, k + 1) + std::pow(xv, 2 * k + 1) + std::pow(xv, 3 * k + 1));
      r["x1_w"] = xw;
      r["x1_v"] = xv;
      r["ratio"] = xw / denom;
      r["l2_excess"] = excess;
    } catch (const BlowUpError& e) {
      record_blow_up(r, e);
    }
    return r;
  });
}

Evaluation evaluate_estimate_monitor(const ExperimentConfig& cfg, const std::vector<Json>& recs) {
  Evaluation ev;
  ev.summary["max_ratio"] = max_of(recs, "ratio");
  ev.summary["max_l2_excess"] = max_of(recs, "l2_excess");
  ev.checks.push_back(check("blow_ups", count_if(recs, "blow_up"), "==", 0));
  ev.checks.push_back(check("nonfinite_ratios", count_nonfinite(recs, "ratio"), "==", 0));
  ev.checks.push_back(check("max_ratio", max_of(recs, "ratio"), "<=", cfg.max_ratio));
  ev.checks.push_back(check("max_l2_excess", max_of(recs, "l2_excess"), "<=", 1e-12));
  PlotSeries p{"ratio_by_sample", "sample", "X1 estimate ratio", {}};
  for (const auto& r : recs) p.points.emplace_back(num(r, "sample_index"), num(r, "ratio"));
  ev.plots.push_back(std::move(p));
  return ev;
}

// ---- dispatch --------------------------------------------------------------

struct Handlers {
  Producer produce;
  Evaluation (*evaluate)(const ExperimentConfig&, const std::vector<Json>&);
};

Handlers handlers(ExperimentName name) {
  switch (name) {
    case ExperimentName::simulate: return {produce_simulate, evaluate_simulate};
    case ExperimentName::conservation: return {produce_conservation, evaluate_conservation};
    case ExperimentName::gauge_residual: return {produce_gauge_residual, evaluate_gauge_residual};
    case ExperimentName::strichartz_scan: return {produce_strichartz, evaluate_strichartz};
    case ExperimentName::flowmap: return {produce_flowmap, evaluate_flowmap};
    case ExperimentName::scaling: return {produce_scaling, evaluate_scaling};
    case ExperimentName::convergence: return {produce_convergence, evaluate_convergence};
    case ExperimentName::estimate_monitor: return {produce_estimate_monitor, evaluate_estimate_monitor};
    case ExperimentName::bernstein: return {produce_bernstein, evaluate_bernstein};
    case ExperimentName::gauge_lipschitz: return {produce_gauge_lipschitz, evaluate_gauge_lipschitz};
  }
  throw ParameterError("unknown experiment");
}

void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  out << s;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

bool Evaluation::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, unsigned n_threads) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.config = cfg;
  const Handlers h = handlers(cfg.name);
  rep.records = h.produce(cfg, n_threads, rep.trajectory);
  std::stable_sort(rep.records.begin(), rep.records.end(), [](const Json& a, const Json& b) {
    return a.at("sample_index").get<std::size_t>() < b.at("sample_index").get<std::size_t>();
  });
  rep.evaluation = h.evaluate(cfg, rep.records);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

Evaluation evaluate(const ExperimentConfig& cfg, const std::vector<Json>& records) {
  return handlers(cfg.name).evaluate(cfg, records);
}

Json config_echo(const ExperimentConfig& cfg) {
  Json j = Json::object();
  j["experiment"] = to_string(cfg.name);
  for (const auto& key : config_keys()) j[key] = get_config_value(cfg, key);
  return j;
}

std::string summary_text(const ExperimentReport& r) {
  Json j = Json::object();
  j["experiment"] = to_string(r.config.name);
  j["config"] = config_echo(r.config);
  j["n_records"] = r.records.size();
  j["statistics"] = r.evaluation.summary;
  Json checks = Json::array();
  for (const auto& c : r.evaluation.checks)
    checks.push_back({{"name", c.name},
                      {"measured", c.measured},
                      {"relation", c.relation},
                      {"threshold", c.threshold},
                      {"pass", c.pass}});
  j["checks"] = checks;
  j["passed"] = r.passed();
  return j.dump(2) + "\n";
}

std::string records_text(const ExperimentReport& r) {
  std::string out;
  for (const auto& rec : r.records) out += rec.dump() + "\n";
  return out;
}

std::vector<Json> parse_records(const std::string& jsonl) {
  std::vector<Json> out;
  std::istringstream in(jsonl);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(Json::parse(line));
  return out;
}

void write_report(const ExperimentReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "summary.json", summary_text(r));
  write_text(dir / "records.jsonl", records_text(r));
  write_text(dir / "timing.json", Json{{"wall_seconds", r.wall_seconds}}.dump(2) + "\n");
  for (const auto& p : r.evaluation.plots) {
    std::string s = "# " + p.x_label + "\t" + p.y_label + "\n";
    for (const auto& [x, y] : p.points) s += fmt(x) + "\t" + fmt(y) + "\n";
    write_text(dir / (p.name + ".dat"), s);
  }
  if (r.trajectory) save_checkpoint(*r.trajectory, dir / "trajectory.bosp");
}

std::filesystem::path default_output_dir(const ExperimentConfig& cfg) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream os;
  os << to_string(cfg.name) << "-" << std::put_time(&utc, "%Y%m%dT%H%M%SZ") << "-" << cfg.seed;
  return std::filesystem::path("runs") / os.str();
}

}  // namespace bo
