#include "bo/gauge.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "bo/errors.hpp"
#include "bo/evolution.hpp"
#include "bo/spectral.hpp"

namespace bo {
namespace {

constexpr Complex kI{0.0, 1.0};

SpectralField dx(const SpectralField& f, int n = 1) { return differentiate(f, Derivative::d_dx(n)); }
SpectralField plus(const SpectralField& f) { return project(f, Projection::plus()); }
SpectralField minus(const SpectralField& f) { return project(f, Projection::minus()); }

void require_k(int k) {
  if (k < 1) throw ParameterError("gauge: k must be >= 1, got " + std::to_string(k));
}

SpectralField primitive(const SpectralField& v, GaugeVariant variant, int k) {
  if (variant == GaugeVariant::bo) return antiderivative(v);
  return antiderivative(fluctuation(power(v, k)));
}

// w and w_t at one instant, given v and its time derivative.
struct GaugeRates {
  SpectralField w;
  SpectralField wt;
};

GaugeRates rates_bo(const SpectralField& u, const SpectralField& ut, const SpectralField& phase) {
  const SpectralField Ft = antiderivative(fluctuation(ut));
  const SpectralField inner = (-kI) * multiply(Ft, u) + ut;
  return {(-kI) * plus(multiply(phase, u)), (-kI) * plus(multiply(phase, inner))};
}

GaugeRates rates_gbo(const SpectralField& v, const SpectralField& vt, int k, const SpectralField& phase) {
  const SpectralField Ft = antiderivative(fluctuation(double(k) * multiply(power(v, k - 1), vt)));
  const SpectralField inner = (-kI) * multiply(Ft, v) + vt;
  return {plus(multiply(phase, v)), plus(multiply(phase, inner))};
}

ResidualNorms residual_norms(const SpectralField& r) { return {norm(r, Norm::l2()), norm(r, Norm::hs(1))}; }

SpectralField gauge_rhs(const SpectralField& v, GaugeVariant variant, int k, const SpectralField& F) {
  if (variant == GaugeVariant::bo) return rhs_bo(v, F).total;
  return rhs_gbo_terms(v, k).total();
}

}  // namespace

SpectralField phase_factor(const SpectralField& F, double sign) {
  if (!F.is_real()) throw PreconditionError("phase_factor needs a real F");
  return map_pointwise(F, [sign](Complex f) { return std::polar(1.0, sign * f.real()); }, false);
}

GaugeState build_gauge(const SpectralField& v, GaugeVariant variant, int k) {
  require_k(k);
  if (!v.is_real()) throw PreconditionError("build_gauge needs a real field");
  SpectralField F = primitive(v, variant, k);
  SpectralField phase = phase_factor(F);
  SpectralField W = plus(phase);
  SpectralField w = variant == GaugeVariant::bo ? (-kI) * plus(multiply(phase, v)) : plus(multiply(phase, v));
  return {std::move(F), std::move(phase), std::move(W), std::move(w), variant,
          variant == GaugeVariant::bo ? 1 : k};
}

double phase_unit_defect(const GaugeState& g) {
  return (synthesize(g.phase).cwiseAbs().array() - 1.0).abs().maxCoeff();
}

Trajectory remove_mean_bo(const Trajectory& u) {
  const EquationTag tag = u.tag();
  const bool is_bo = (tag.equation == Equation::gbo && tag.k == 1) || tag.equation == Equation::bo2;
  if (!is_bo) throw PreconditionError("remove_mean_bo needs a gbo(1) or bo2 trajectory, got " + to_string(tag));
  const double gamma = u.front().mean().real();
  const double drift = tag.equation == Equation::bo2 ? 2.0 * gamma : gamma;
  std::vector<SpectralField> out;
  out.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out.push_back(fluctuation(translate(u[i], drift * u.times()[i])));
  return {u.times(), std::move(out), tag, u.solver()};
}

Trajectory renormalize_gbo(const Trajectory& u) {
  const EquationTag tag = u.tag();
  if (tag.equation != Equation::gbo)
    throw PreconditionError("renormalize_gbo needs a gbo trajectory, got " + to_string(tag));
  const int k = tag.k;
  const double scale = std::pow(2.0, -1.0 / k);
  std::vector<SpectralField> out;
  out.reserve(u.size());
  double shift = 0.0;
  double prev_rate = power(u[0], k).mean().real();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i > 0) {
      const double rate = power(u[i], k).mean().real();
      shift += 0.5 * (rate + prev_rate) * (u.times()[i] - u.times()[i - 1]);
      prev_rate = rate;
    }
    out.push_back(scale * translate(u[i], shift));
  }
  return {u.times(), std::move(out), EquationTag{Equation::renormalized_gbo, k}, u.solver()};
}

BoRhs rhs_bo(const SpectralField& u, const SpectralField& F) {
  if (!(std::abs(u.mean()) < kZeroMeanTolerance))
    throw PreconditionError("rhs_bo needs zero-mean u, |C_0| = " + std::to_string(std::abs(u.mean())));
  const SpectralField phase = phase_factor(F);
  SpectralField dispersive = -2.0 * dx(plus(multiply(minus(dx(u)), phase)));
  const double mean_sq = power(u, 2).mean().real();
  SpectralField mean_term = mean_sq * plus(multiply(u, phase));
  SpectralField total = dispersive + mean_term;
  return {std::move(dispersive), std::move(mean_term), std::move(total)};
}

GboTerms rhs_gbo_terms(const SpectralField& v, int k) {
  require_k(k);
  if (!(std::abs(v.mean()) < kZeroMeanTolerance))
    throw PreconditionError("rhs_gbo_terms needs zero-mean v, |C_0| = " + std::to_string(std::abs(v.mean())));
  const SpectralField mvk = fluctuation(power(v, k));
  const SpectralField F = antiderivative(mvk);
  const SpectralField phase = phase_factor(F);
  const SpectralField vx = dx(v);
  const SpectralField phase_v = multiply(phase, v);

  const double p0 = power(mvk, 2).mean().real();
  SpectralField a = Complex(0.0, p0) * plus(phase_v);
  SpectralField b = Complex(0.0, -2.0) * plus(multiply(phase, minus(dx(v, 2))));
  const SpectralField inner_c = fluctuation(multiply(power(v, k - 1), minus(vx)));
  SpectralField c = (-2.0 * k) * plus(multiply(phase_v, inner_c));
  SpectralField h = SpectralField::zero(v.grid());
  SpectralField d = SpectralField::zero(v.grid(), false);
  if (k >= 2) {
    h = antiderivative(fluctuation(multiply(multiply(power(v, k - 2), vx), hilbert(vx))));
    d = Complex(0.0, -double(k) * (k - 1)) * plus(multiply(phase_v, h));
  }
  return {std::move(a), std::move(b), std::move(c), std::move(d), std::move(h)};
}

ResidualNorms gauge_residual(const SpectralField& v, GaugeVariant variant, int k) {
  require_k(k);
  if (!v.is_real()) throw PreconditionError("gauge_residual needs a real field");
  const SpectralField vxx = dx(v, 2);
  if (variant == GaugeVariant::bo) {
    const SpectralField F = antiderivative(v);
    const SpectralField phase = phase_factor(F);
    const SpectralField ut = -hilbert(vxx) + dx(power(v, 2));
    const GaugeRates r = rates_bo(v, ut, phase);
    return residual_norms(r.wt - kI * dx(r.w, 2) - rhs_bo(v, F).total);
  }
  const SpectralField mvk = fluctuation(power(v, k));
  const SpectralField phase = phase_factor(antiderivative(mvk));
  const SpectralField vt = -hilbert(vxx) + 2.0 * multiply(mvk, dx(v));
  const GaugeRates r = rates_gbo(v, vt, k, phase);
  return residual_norms(r.wt - kI * dx(r.w, 2) - rhs_gbo_terms(v, k).total());
}

ResidualNorms gauge_residual(const Trajectory& traj, GaugeVariant variant, int k) {
  require_k(k);
  if (traj.size() < 5) throw ParameterError("trajectory gauge residual needs at least 5 snapshots");
  const EquationTag want = variant == GaugeVariant::bo ? EquationTag{Equation::bo2, 1}
                                                       : EquationTag{Equation::renormalized_gbo, k};
  if (!(traj.tag() == want))
    throw PreconditionError("gauge residual expects a " + to_string(want) + " trajectory, got " +
                            to_string(traj.tag()));
  std::vector<SpectralField> ws;
  ws.reserve(traj.size());
  for (const auto& v : traj.snapshots()) ws.push_back(build_gauge(v, variant, k).w);
  const double h = traj.sample_spacing();
  ResidualNorms worst;
  for (std::size_t i = 2; i + 2 < traj.size(); ++i) {
    const SpectralField& v = traj[i];
    const SpectralField F = primitive(v, variant, k);
    const SpectralField res =
        centred_time_derivative(ws, i, h) - kI * dx(ws[i], 2) - gauge_rhs(v, variant, k, F);
    const ResidualNorms r = residual_norms(res);
    worst.l2 = std::max(worst.l2, r.l2);
    worst.h1 = std::max(worst.h1, r.h1);
  }
  return worst;
}

SpectralField reconstruct_u(const GaugeState& gauge, const SpectralField& v) {
  if (gauge.variant != GaugeVariant::bo)
    throw UnsupportedError("reconstruct_u is only defined for the bo gauge");
  const SpectralField conj_phase = phase_factor(gauge.F, +1.0);
  return multiply(conj_phase, kI * gauge.w) + multiply(conj_phase, minus(multiply(gauge.phase, v)));
}

LipschitzGap gauge_lipschitz_gap(const SpectralField& phi1, const SpectralField& phi2, GaugeVariant variant,
                                 int k) {
  require_k(k);
  if (!(phi1.grid() == phi2.grid())) throw DimensionError("gauge_lipschitz_gap: different grids");
  if (phi1.coeffs() == phi2.coeffs()) return {0.0, 0.0, true};
  const int fine = kDefaultPad * phi1.grid().size();
  const Eigen::VectorXd f1 = synthesize_real(resample(primitive(phi1, variant, k), fine));
  const Eigen::VectorXd f2 = synthesize_real(resample(primitive(phi2, variant, k), fine));
  double gap = 0.0;
  for (Eigen::Index j = 0; j < f1.size(); ++j)
    gap = std::max(gap, std::abs(std::polar(1.0, -f1[j]) - std::polar(1.0, -f2[j])));
  const double dist = norm(phi1 - phi2, Norm::l2());
  return {gap, gap / (std::sqrt(phi1.grid().lambda()) * dist), false};
}

}  // namespace bo
