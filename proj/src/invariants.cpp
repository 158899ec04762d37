#include "bo/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bo/errors.hpp"
#include "bo/quadrature.hpp"
#include "bo/spectral.hpp"

namespace bo {
namespace {

double integral_of(const SpectralField& f) { return integral(f).real(); }

InvariantSeries make_series(std::string name, std::vector<double> values) {
  const double d = relative_drift(values);
  return {std::move(name), std::move(values), d};
}

}  // namespace

double invariant(const SpectralField& u, Invariant which) {
  if (!u.is_real()) throw PreconditionError("invariants are defined for real fields");
  const PeriodicGrid& g = u.grid();
  switch (which.kind) {
    case Invariant::Kind::I: return integral_of(u);
    case Invariant::Kind::M: {
      const double l2 = norm(u, Norm::l2());
      return l2 * l2;
    }
    case Invariant::Kind::F_bo: {
      const double grad = std::pow(norm(differentiate(u, Derivative::d_dx(1)), Norm::l2()), 2);
      const SpectralField hux = hilbert(differentiate(u, Derivative::d_dx(1)));
      const double cubic = integral_of(multiply(power(u, 2), hux));
      const double quartic = integral_of(power(u, 4));
      return grad + which.fbo.cubic * 0.75 * cubic + which.fbo.quartic * 0.125 * quartic;
    }
    case Invariant::Kind::E_gbo: {
      const int k = which.k;
      if (k < 1) throw ParameterError("E_gbo needs k >= 1");
      const double half_d = 0.5 * g.period() * std::pow(norm(u, Norm::hs_dot(0.5)), 2);
      const double top = integral_of(power(u, k + 2));
      return half_d + which.energy_sign * top / double((k + 1) * (k + 2));
    }
  }
  throw ParameterError("unknown invariant");
}

double relative_drift(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double worst = 0.0;
  for (double v : values) worst = std::max(worst, std::abs(v - values.front()));
  return worst / std::max(std::abs(values.front()), kDriftFloor);
}

const InvariantSeries& InvariantReport::at(const std::string& name) const {
  for (const auto& s : series)
    if (s.name == name) return s;
  throw ParameterError("invariant report has no series '" + name + "'");
}

InvariantReport drift_report(const Trajectory& traj, FboSigns signs) {
  const EquationTag tag = traj.tag();
  std::vector<double> I, M, top;
  std::string top_name;
  const bool bo = (tag.equation == Equation::gbo && tag.k == 1) || tag.equation == Equation::bo2;
  const bool gbo = tag.equation == Equation::gbo && tag.k >= 2;
  for (const auto& u : traj.snapshots()) {
    I.push_back(invariant(u, Invariant::I()));
    M.push_back(invariant(u, Invariant::M()));
    if (bo) top.push_back(invariant(tag.equation == Equation::bo2 ? 2.0 * u : u, Invariant::F_bo(signs)));
    if (gbo) top.push_back(invariant(u, Invariant::E_gbo(tag.k)));
  }
  InvariantReport r{traj.times(), {}};
  r.series.push_back(make_series("I", std::move(I)));
  r.series.push_back(make_series("M", std::move(M)));
  if (bo) r.series.push_back(make_series("F", std::move(top)));
  if (gbo) r.series.push_back(make_series("E", std::move(top)));
  return r;
}

double xnorm(const Trajectory& traj, int level) {
  if (level < 0 || level > 2) throw ParameterError("xnorm level must be 0, 1 or 2");
  const double h = traj.sample_spacing();
  double total = 0.0;
  for (int j = 0; j <= level; ++j) {
    double sup_l2 = 0.0;
    std::vector<double> quartic;
    quartic.reserve(traj.size());
    for (const auto& u : traj.snapshots()) {
      const SpectralField d = j == 0 ? u : differentiate(u, Derivative::d_dx(j));
      sup_l2 = std::max(sup_l2, norm(d, Norm::l2()));
      const double l4 = norm(d, Norm::lp(4));
      quartic.push_back(l4 * l4 * l4 * l4);
    }
    total += sup_l2 + std::pow(composite_quadrature(quartic, h), 0.25);
  }
  return total;
}

AprioriCheck h1_apriori_check(const Trajectory& traj) {
  const double h0 = norm(traj.front(), Norm::hs(1));
  if (h0 == 0.0) return {0.0, true};
  double worst = 0.0;
  for (const auto& u : traj.snapshots()) worst = std::max(worst, norm(u, Norm::hs(1)) / h0);
  return {worst, false};
}

SpectralField dilate(const SpectralField& f, double lambda, DilationVariant variant, int k, int target_n) {
  if (!(lambda >= 1.0)) throw ParameterError("dilate: lambda must be >= 1");
  if (variant == DilationVariant::gbo && k < 1) throw ParameterError("dilate: k must be >= 1");
  const double amplitude = variant == DilationVariant::bo ? 1.0 / lambda : std::pow(lambda, -1.0 / k);
  const int n = target_n == 0 ? f.grid().size() : target_n;
  if (n < f.grid().size()) throw ParameterError("dilate: target grid must not be coarser than the source");
  const SpectralField padded = resample(f, n);
  return {PeriodicGrid(f.grid().lambda() * lambda, n), padded.coeffs() * amplitude, f.is_real()};
}

FboCalibration calibrate_fbo(const Trajectory& gbo1, const SolverConfig& cfg) {
  if (!(gbo1.tag() == EquationTag{Equation::gbo, 1}))
    throw PreconditionError("calibrate_fbo expects a gbo(1) trajectory, got " + to_string(gbo1.tag()));
  FboCalibration cal{};
  auto score = [&](const Trajectory& traj) {
    for (int cubic : {-1, +1})
      for (int quartic : {-1, +1}) {
        std::vector<double> values;
        for (const auto& u : traj.snapshots())
          values.push_back(invariant(u, Invariant::F_bo(FboSigns{cubic, quartic})));
        cal.candidates.push_back({traj.tag().equation, FboSigns{cubic, quartic}, relative_drift(values)});
      }
  };
  auto best = [&] {
    return *std::min_element(cal.candidates.begin(), cal.candidates.end(),
                             [](const auto& a, const auto& b) { return a.drift < b.drift; });
  };
  score(gbo1);
  if (best().drift >= 1e-6) {
    SolverConfig c = cfg;
    c.equation = Equation::bo2;
    c.k = 1;
    score(solve(gbo1.front(), c));
  }
  cal.selected = best();
  auto lookup = [&](FboSigns s) {
    for (const auto& c : cal.candidates)
      if (c.convention == cal.selected.convention && c.signs == s) return c.drift;
    return std::numeric_limits<double>::quiet_NaN();
  };
  cal.opposite_cubic_drift = lookup({-cal.selected.signs.cubic, cal.selected.signs.quartic});
  cal.negative_quartic_drift = lookup(kFboNegativeQuartic);
  return cal;
}

FboCalibration calibrate_fbo(const SpectralField& u0, const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.equation = Equation::gbo;
  c.k = 1;
  return calibrate_fbo(solve(u0, c), cfg);
}

}  // namespace bo
