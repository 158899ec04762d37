#include "bo/evolution.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bo/spectral.hpp"

namespace bo {
namespace {

int product_pad(Dealias d) { return d == Dealias::pad4 ? 4 : 1; }

void two_thirds_filter(Eigen::VectorXcd& c) {
  const int n = int(c.size());
  for (int i = 0; i < n; ++i) {
    const int m = i <= n / 2 ? i : i - n;
    if (3 * std::abs(m) > n) c[i] = 0.0;
  }
}

// Symbol of -H d_xx: -i q|q|, zero on the Nyquist slot.
Eigen::VectorXcd linear_symbol(const PeriodicGrid& g) {
  const int n = g.size();
  Eigen::VectorXcd L = Eigen::VectorXcd::Zero(n);
  for (int m = 1; m < n / 2; ++m) {
    const double q = m / g.lambda();
    L[m] = Complex(0.0, -q * q);
    L[n - m] = Complex(0.0, q * q);
  }
  return L;
}

struct EtdCoefficients {
  Eigen::VectorXcd e, e2, q, f1, f2, f3;
};

// Cox-Matthews coefficients by contour averaging around z = L h, which stays
// accurate where L h is tiny (Kassam-Trefethen).
EtdCoefficients etd_coefficients(const Eigen::VectorXcd& L, double h) {
  constexpr int kContour = 32;
  const int n = int(L.size());
  EtdCoefficients c{Eigen::VectorXcd(n), Eigen::VectorXcd(n), Eigen::VectorXcd(n),
                    Eigen::VectorXcd(n), Eigen::VectorXcd(n), Eigen::VectorXcd(n)};
  auto fill = [&](int i) {
    const Complex z0 = L[i] * h;
    Complex q = 0, f1 = 0, f2 = 0, f3 = 0;
    for (int j = 0; j < kContour; ++j) {
      const Complex z = z0 + std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / kContour);
      const Complex ez = std::exp(z), ez2 = std::exp(0.5 * z);
      const Complex z3 = z * z * z;
      q += (ez2 - 1.0) / z;
      f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
      f2 += (2.0 + z + ez * (z - 2.0)) / z3;
      f3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
    }
    c.e[i] = std::exp(z0);
    c.e2[i] = std::exp(0.5 * z0);
    c.q[i] = h * q / double(kContour);
    c.f1[i] = h * f1 / double(kContour);
    c.f2[i] = h * f2 / double(kContour);
    c.f3[i] = h * f3 / double(kContour);
  };
  for (int m = 0; m <= n / 2; ++m) fill(m);
  for (int m = 1; m < n / 2; ++m) {
    for (auto* v : {&c.e, &c.e2, &c.q, &c.f1, &c.f2, &c.f3}) (*v)[n - m] = std::conj((*v)[m]);
  }
  // L = 0 on slots 0 and N/2: the contour means are real up to round-off.
  for (auto* v : {&c.e, &c.e2, &c.q, &c.f1, &c.f2, &c.f3}) {
    (*v)[0] = (*v)[0].real();
    (*v)[n / 2] = (*v)[n / 2].real();
  }
  return c;
}

bool blown_up(const Eigen::VectorXcd& c) {
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double a = std::abs(c[i]);
    if (!std::isfinite(a) || a > kBlowUpThreshold) return true;
  }
  return false;
}

void validate(const SpectralField& u0, const SolverConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw ParameterError("solver dt must be positive");
  if (!(cfg.t_final > 0.0)) throw ParameterError("solver t_final must be positive");
  if (cfg.dt > cfg.t_final * (1.0 + 1e-12)) throw ParameterError("solver dt exceeds t_final");
  if (cfg.sample_stride < 1) throw ParameterError("sample_stride must be >= 1");
  if ((cfg.equation == Equation::gbo || cfg.equation == Equation::renormalized_gbo) && cfg.k < 1)
    throw ParameterError("nonlinearity power k must be >= 1");
  if (!u0.is_real()) throw PreconditionError("initial data must be a real field");
  if (cfg.equation == Equation::renormalized_gbo && !(std::abs(u0.mean()) < kZeroMeanTolerance))
    throw PreconditionError("renormalized equation needs zero-mean data, |C_0| = " +
                            std::to_string(std::abs(u0.mean())));
}

}  // namespace

BlowUpError::BlowUpError(double last_good_time, SpectralField last_good)
    : Error("solution blew up after t = " + std::to_string(last_good_time)),
      last_good_time_(last_good_time),
      last_good_(std::move(last_good)) {}

SpectralField nonlinear_term(const SpectralField& u, EquationTag tag, Dealias dealias) {
  const int pad = product_pad(dealias);
  const auto dx = Derivative::d_dx(1);
  SpectralField out = SpectralField::zero(u.grid());
  switch (tag.equation) {
    case Equation::linear: return out;
    case Equation::gbo:
      out = (1.0 / (tag.k + 1)) * differentiate(power(u, tag.k + 1, pad), dx);
      break;
    case Equation::bo2:
      out = differentiate(power(u, 2, pad), dx);
      break;
    case Equation::renormalized_gbo: {
      // 2 M(u^k) u_x = 2 d_x(u^{k+1})/(k+1) - 2 mean(u^k) u_x
      const double mean_pow = power(u, tag.k, pad).mean().real();
      out = (2.0 / (tag.k + 1)) * differentiate(power(u, tag.k + 1, pad), dx) -
            (2.0 * mean_pow) * differentiate(u, dx);
      break;
    }
  }
  if (dealias != Dealias::two_thirds) return out;
  Eigen::VectorXcd c = out.coeffs();
  two_thirds_filter(c);
  return {u.grid(), std::move(c), true};
}

Trajectory solve(const SpectralField& u0, const SolverConfig& cfg) {
  validate(u0, cfg);
  const double steps_real = cfg.t_final / cfg.dt;
  const long n_steps = std::lround(steps_real);
  if (std::abs(steps_real - double(n_steps)) > 1e-9 * std::max(1.0, steps_real))
    throw ParameterError("t_final must be a whole number of dt steps");
  if (n_steps % cfg.sample_stride != 0)
    throw ParameterError("number of steps must be a multiple of sample_stride");

  const PeriodicGrid& g = u0.grid();
  const EquationTag tag = cfg.tag();
  const double h = cfg.t_final / double(n_steps);
  const Eigen::VectorXcd L = linear_symbol(g);
  auto N = [&](const Eigen::VectorXcd& c) -> Eigen::VectorXcd {
    if (!c.allFinite()) return c;  // let the blow-up check see it
    return nonlinear_term(SpectralField(g, c, true), tag, cfg.dealias).coeffs();
  };

  // IF-RK4 phases.
  const Eigen::VectorXcd E = (L * h).array().exp();
  const Eigen::VectorXcd E2 = (L * (0.5 * h)).array().exp();
  EtdCoefficients etd;
  if (cfg.scheme == Scheme::etd_rk4) etd = etd_coefficients(L, h);

  auto step = [&](const Eigen::VectorXcd& u) -> Eigen::VectorXcd {
    if (cfg.scheme == Scheme::if_rk4) {
      const Eigen::VectorXcd k1 = N(u);
      const Eigen::VectorXcd k2 = N(E2.cwiseProduct(u + (0.5 * h) * k1));
      const Eigen::VectorXcd k3 = N(E2.cwiseProduct(u) + (0.5 * h) * k2);
      const Eigen::VectorXcd k4 = N(E.cwiseProduct(u) + h * E2.cwiseProduct(k3));
      return E.cwiseProduct(u) +
             (h / 6.0) * (E.cwiseProduct(k1) + 2.0 * E2.cwiseProduct(k2 + k3) + k4);
    }
    const Eigen::VectorXcd nu = N(u);
    const Eigen::VectorXcd a = etd.e2.cwiseProduct(u) + etd.q.cwiseProduct(nu);
    const Eigen::VectorXcd na = N(a);
    const Eigen::VectorXcd b = etd.e2.cwiseProduct(u) + etd.q.cwiseProduct(na);
    const Eigen::VectorXcd nb = N(b);
    const Eigen::VectorXcd c = etd.e2.cwiseProduct(a) + etd.q.cwiseProduct(2.0 * nb - nu);
    const Eigen::VectorXcd nc = N(c);
    return etd.e.cwiseProduct(u) + etd.f1.cwiseProduct(nu) + 2.0 * etd.f2.cwiseProduct(na + nb) +
           etd.f3.cwiseProduct(nc);
  };

  std::vector<double> times{0.0};
  std::vector<SpectralField> snaps{u0};
  Eigen::VectorXcd u = u0.coeffs();
  for (long s = 1; s <= n_steps; ++s) {
    Eigen::VectorXcd next = step(u);
    if (blown_up(next)) throw BlowUpError(double(s - 1) * h, SpectralField(g, u, true));
    u = std::move(next);
    if (s % cfg.sample_stride == 0) {
      times.push_back(double(s) * h);
      snaps.emplace_back(g, u, true);
    }
  }
  return {std::move(times), std::move(snaps), tag, SolverInfo{cfg.scheme, h, cfg.dealias}};
}

ConvergenceResult convergence_order(const SpectralField& u0, const SolverConfig& cfg, int n_levels) {
  if (n_levels < 3) throw ParameterError("convergence_order needs n_levels >= 3");
  std::vector<SpectralField> finals;
  ConvergenceResult r;
  for (int l = 0; l < n_levels; ++l) {
    SolverConfig c = cfg;
    c.dt = cfg.dt / double(1 << l);
    c.sample_stride = int(std::lround(c.t_final / c.dt));
    finals.push_back(solve(u0, c).back());
    r.dts.push_back(c.dt);
  }
  r.dts.pop_back();
  for (int l = 0; l + 1 < n_levels; ++l) r.errors.push_back(norm(finals[l] - finals.back(), Norm::l2()));

  r.exact = true;
  for (double e : r.errors) r.exact = r.exact && e < 1e-12;
  if (r.exact) {
    r.order = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(r.errors.size());
  for (std::size_t i = 0; i < r.errors.size(); ++i) {
    const double x = std::log(r.dts[i]), y = std::log(r.errors[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  r.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return r;
}

}  // namespace bo

namespace bo {

SpectralField centred_time_derivative(const std::vector<SpectralField>& snaps, std::size_t i, double h) {
  if (i < 2 || i + 2 >= snaps.size()) throw ParameterError("centred difference needs two samples each side");
  SpectralField d = snaps[i - 2] - snaps[i + 2] + 8.0 * (snaps[i + 1] - snaps[i - 1]);
  return (1.0 / (12.0 * h)) * d;
}

PdeResidual pde_residual(const Trajectory& traj) {
  if (traj.size() < 5) throw ParameterError("pde_residual needs at least 5 snapshots");
  const double h = traj.sample_spacing();
  PdeResidual r;
  for (std::size_t i = 2; i + 2 < traj.size(); ++i) {
    const SpectralField& u = traj[i];
    const SpectralField res = centred_time_derivative(traj.snapshots(), i, h) +
                              hilbert(differentiate(u, Derivative::d_dx(2))) -
                              nonlinear_term(u, traj.tag(), Dealias::pad4);
    r.max_l2 = std::max(r.max_l2, norm(res, Norm::l2()));
    r.max_h1 = std::max(r.max_h1, norm(res, Norm::hs(1)));
  }
  return r;
}

}  // namespace bo
