#include "bo/linear_group.hpp"

#include <cmath>
#include <vector>

#include "bo/errors.hpp"
#include "bo/quadrature.hpp"
#include "bo/spectral.hpp"

namespace bo {
namespace {

// ||V(t_j) phi||_{L^4}^4 at t_j = j T / n_t, j = 0..n_t.
std::vector<double> quartic_samples(const SpectralField& phi, double T, int n_t) {
  std::vector<double> v(n_t + 1);
  for (int j = 0; j <= n_t; ++j) {
    const double l4 = norm(propagate(phi, T * j / n_t), Norm::lp(4));
    v[j] = l4 * l4 * l4 * l4;
  }
  return v;
}

}  // namespace

SpectralField propagate(const SpectralField& f, double t, GroupKind kind) {
  const PeriodicGrid& g = f.grid();
  const int n = g.size();
  Eigen::VectorXcd out = f.coeffs();
  if (kind == GroupKind::bo_group) {
    // q|q| is odd: the Nyquist slot, where H vanishes, is left untouched.
    for (int m = 1; m < n / 2; ++m) {
      const double q = m / g.lambda();
      const Complex phase = std::polar(1.0, -q * q * t);
      out[m] *= phase;
      out[n - m] *= std::conj(phase);
    }
    return {g, std::move(out), f.is_real()};
  }
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double q = g.frequency(i);
    out[i] *= std::polar(1.0, -q * q * t);
  }
  return {g, std::move(out), false};
}

double strichartz_norm(const SpectralField& phi, double T, int n_t) {
  if (!(T > 0.0)) throw ParameterError("strichartz_norm: T must be positive");
  if (n_t < 16) throw ParameterError("strichartz_norm: n_t must be >= 16");
  const auto v = quartic_samples(phi, T, n_t);
  return std::pow(composite_quadrature(v, T / n_t), 0.25);
}

StrichartzEstimate strichartz_norm_converged(const SpectralField& phi, double T, double rel_tol, int n_t0,
                                             int n_t_max) {
  if (!(T > 0.0)) throw ParameterError("strichartz_norm: T must be positive");
  if (n_t0 < 16 || n_t0 % 2 != 0) throw ParameterError("strichartz_norm: n_t0 must be even and >= 16");
  // Reuse the coarse samples: each doubling only evaluates the new midpoints.
  std::vector<double> v = quartic_samples(phi, T, n_t0);
  int n_t = n_t0;
  double prev = std::pow(composite_quadrature(v, T / n_t), 0.25);
  while (2 * n_t <= n_t_max) {
    std::vector<double> finer(2 * n_t + 1);
    for (int j = 0; j <= n_t; ++j) finer[2 * j] = v[j];
    for (int j = 0; j < n_t; ++j) {
      const double l4 = norm(propagate(phi, T * (2 * j + 1) / (2 * n_t)), Norm::lp(4));
      finer[2 * j + 1] = l4 * l4 * l4 * l4;
    }
    v = std::move(finer);
    n_t *= 2;
    const double cur = std::pow(composite_quadrature(v, T / n_t), 0.25);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return {cur, n_t, true};
    prev = cur;
  }
  return {prev, n_t, false};
}

}  // namespace bo
