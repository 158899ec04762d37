#include "bo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bo/errors.hpp"
#include "fft.hpp"

namespace bo {
namespace {

enum class NyquistRule { symbol, real_part, zero };

// Applies a symbol with sigma(-q) = conj(sigma(q)), which maps real fields to
// real fields. Only m >= 0 is evaluated; negative modes receive the conjugate
// so the output symmetry is exact.
SpectralField apply_real_symbol(const SpectralField& f, const std::function<Complex(double)>& sigma,
                                NyquistRule rule) {
  const PeriodicGrid& g = f.grid();
  const int n = g.size();
  Eigen::VectorXcd out(n);
  const auto& c = f.coeffs();
  out[0] = c[0] * sigma(0.0);
  for (int m = 1; m < n / 2; ++m) {
    const Complex s = sigma(m / g.lambda());
    out[m] = c[m] * s;
    out[n - m] = c[n - m] * std::conj(s);
  }
  const Complex s_nyq = sigma((n / 2) / g.lambda());
  switch (rule) {
    case NyquistRule::symbol: out[n / 2] = c[n / 2] * s_nyq; break;
    case NyquistRule::real_part: out[n / 2] = c[n / 2] * s_nyq.real(); break;
    case NyquistRule::zero: out[n / 2] = 0.0; break;
  }
  if (f.is_real() && rule == NyquistRule::symbol) out[n / 2] = out[n / 2].real();
  out[0] = f.is_real() ? Complex(out[0].real(), 0.0) : out[0];
  return {g, std::move(out), f.is_real()};
}

// Exact conjugate-symmetric projection of coefficients from real samples.
void symmetrize(Eigen::VectorXcd& c) {
  const Eigen::Index n = c.size();
  c[0] = c[0].real();
  c[n / 2] = c[n / 2].real();
  for (Eigen::Index m = 1; m < n / 2; ++m) {
    const Complex avg = 0.5 * (c[m] + std::conj(c[n - m]));
    c[m] = avg;
    c[n - m] = std::conj(avg);
  }
}

int checked_pad(int pad) {
  if (pad < 1) throw ParameterError("padding factor must be >= 1, got " + std::to_string(pad));
  return pad;
}

}  // namespace

SpectralField analyze(const Eigen::VectorXd& samples, const PeriodicGrid& grid) {
  if (samples.size() != grid.size())
    throw DimensionError("analyze: " + std::to_string(samples.size()) + " samples for a grid of " +
                         std::to_string(grid.size()));
  Eigen::VectorXcd c = detail::forward(samples.cast<Complex>());
  symmetrize(c);
  return {grid, std::move(c), true};
}

SpectralField analyze(const Eigen::VectorXcd& samples, const PeriodicGrid& grid) {
  if (samples.size() != grid.size())
    throw DimensionError("analyze: " + std::to_string(samples.size()) + " samples for a grid of " +
                         std::to_string(grid.size()));
  return {grid, detail::forward(samples), false};
}

Eigen::VectorXcd synthesize(const SpectralField& f) { return detail::inverse(f.coeffs()); }

Eigen::VectorXd synthesize_real(const SpectralField& f) {
  if (!f.is_real()) throw PreconditionError("synthesize_real called on a complex field");
  return detail::inverse(f.coeffs()).real();
}

SpectralField resample(const SpectralField& f, int n_points) {
  const PeriodicGrid target = f.grid().resized(n_points);
  const int n = f.grid().size();
  if (n_points == n) return f;
  const auto& c = f.coeffs();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n_points);
  if (n_points > n) {
    for (int m = 0; m < n / 2; ++m) out[m] = c[m];
    for (int m = 1; m < n / 2; ++m) out[n_points - m] = c[n - m];
    out[n / 2] = 0.5 * c[n / 2];
    out[n_points - n / 2] = 0.5 * c[n / 2];
  } else {
    for (int m = 0; m < n_points / 2; ++m) out[m] = c[m];
    for (int m = 1; m < n_points / 2; ++m) out[n_points - m] = c[n - m];
    out[n_points / 2] = c[n_points / 2] + c[n - n_points / 2];
    if (f.is_real()) out[n_points / 2] = out[n_points / 2].real();
  }
  return {target, std::move(out), f.is_real()};
}

SpectralField hilbert(const SpectralField& f) {
  return apply_real_symbol(
      f, [](double q) { return q > 0 ? Complex(0, -1) : (q < 0 ? Complex(0, 1) : Complex(0)); },
      NyquistRule::zero);
}

SpectralField project(const SpectralField& f, Projection which) {
  const PeriodicGrid& g = f.grid();
  const double lam = g.lambda();
  // Mode-count thresholds with slack for the k*lambda round-off.
  const double edge = which.cutoff * lam;
  const double slack = 1e-9 * std::max(1.0, std::abs(edge));
  auto keep = [&](int m) {
    switch (which.kind) {
      case Projection::Kind::plus: return m > 0;
      case Projection::Kind::minus: return m < 0;
      case Projection::Kind::zero: return m == 0;
      case Projection::Kind::leq: return std::abs(m) <= edge + slack;
      case Projection::Kind::gt: return m > edge + slack;
      case Projection::Kind::below: return m < -edge - slack;
    }
    return false;
  };
  Eigen::VectorXcd out = f.coeffs();
  for (Eigen::Index i = 0; i < out.size(); ++i)
    if (!keep(g.mode(i))) out[i] = 0.0;
  const bool symmetric_selection =
      which.kind == Projection::Kind::zero || which.kind == Projection::Kind::leq;
  return {g, std::move(out), f.is_real() && symmetric_selection};
}

SpectralField differentiate(const SpectralField& f, Derivative kind) {
  switch (kind.kind) {
    case Derivative::Kind::d_dx: {
      const int n = int(kind.order);
      if (n < 0 || double(n) != kind.order)
        throw ParameterError("d_dx order must be a nonnegative integer");
      static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      const Complex unit = kIPow[n % 4];
      return apply_real_symbol(
          f, [&](double q) { return unit * std::pow(q, n); },
          n % 2 == 1 ? NyquistRule::zero : NyquistRule::symbol);
    }
    case Derivative::Kind::abs_d: {
      const double s = kind.order;
      if (!(s >= 0.0)) throw ParameterError("abs_d order must be >= 0, got " + std::to_string(s));
      return apply_real_symbol(
          f, [&](double q) { return Complex(q == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(std::abs(q), s)); },
          NyquistRule::symbol);
    }
    case Derivative::Kind::bessel: {
      const double s = kind.order;
      if (!(s >= 0.0)) throw ParameterError("bessel order must be >= 0, got " + std::to_string(s));
      return apply_real_symbol(
          f, [&](double q) { return Complex(std::pow(1.0 + q * q, 0.5 * s)); }, NyquistRule::symbol);
    }
  }
  throw ParameterError("unknown derivative kind");
}

SpectralField antiderivative(const SpectralField& f) {
  const double c0 = std::abs(f.mean());
  if (!(c0 < kZeroMeanTolerance))
    throw PreconditionError("antiderivative needs a zero-mean field, |C_0| = " + std::to_string(c0));
  return apply_real_symbol(
      f, [](double q) { return q == 0.0 ? Complex(0) : Complex(0, -1.0 / q); }, NyquistRule::zero);
}

MeanSplit mean_remove(const SpectralField& f) {
  Eigen::VectorXcd c = f.coeffs();
  const Complex mean = c[0];
  c[0] = 0.0;
  return {mean, SpectralField(f.grid(), std::move(c), f.is_real())};
}

SpectralField fluctuation(const SpectralField& f) { return mean_remove(f).fluctuation; }

SpectralField translate(const SpectralField& f, double shift) {
  return apply_real_symbol(
      f, [shift](double q) { return std::polar(1.0, -q * shift); }, NyquistRule::real_part);
}

SpectralField reflect(const SpectralField& f) {
  const int n = f.grid().size();
  Eigen::VectorXcd out(n);
  out[0] = f.coeffs()[0];
  out[n / 2] = f.coeffs()[n / 2];
  for (int m = 1; m < n / 2; ++m) {
    out[m] = f.coeffs()[n - m];
    out[n - m] = f.coeffs()[m];
  }
  return {f.grid(), std::move(out), f.is_real()};
}

SpectralField apply_symbol(const SpectralField& f, const std::function<Complex(double)>& symbol) {
  const PeriodicGrid& g = f.grid();
  Eigen::VectorXcd out = f.coeffs();
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] *= symbol(g.frequency(i));
  return {g, std::move(out), false};
}

double norm(const SpectralField& f, Norm which) {
  const PeriodicGrid& g = f.grid();
  const auto& c = f.coeffs();
  switch (which.kind) {
    case Norm::Kind::lp: {
      const double p = which.param;
      if (p == 2.0) return std::sqrt(g.period() * c.squaredNorm());
      if (p != 1.0 && p != 4.0)
        throw ParameterError("L^p norm supports p in {1, 2, 4} (and Linf), got " + std::to_string(p));
      const Eigen::VectorXd mod = synthesize(resample(f, kDefaultPad * g.size())).cwiseAbs();
      const double h = g.period() / (kDefaultPad * g.size());
      if (p == 1.0) return h * mod.sum();
      return std::pow(h * mod.array().square().square().sum(), 0.25);
    }
    case Norm::Kind::linf:
      return synthesize(resample(f, kDefaultPad * g.size())).cwiseAbs().maxCoeff();
    case Norm::Kind::hs: {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < c.size(); ++i) {
        const double q = g.frequency(i);
        acc += std::pow(1.0 + q * q, which.param) * std::norm(c[i]);
      }
      return std::sqrt(acc);
    }
    case Norm::Kind::hs_dot: {
      double acc = 0.0;
      for (Eigen::Index i = 1; i < c.size(); ++i)
        acc += std::pow(std::abs(g.frequency(i)), 2.0 * which.param) * std::norm(c[i]);
      return std::sqrt(acc);
    }
  }
  throw ParameterError("unknown norm kind");
}

Complex integral(const SpectralField& f) { return f.grid().period() * f.mean(); }

Complex pairing(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw DimensionError("pairing: fields live on different grids");
  const int n = f.grid().size();
  const auto& a = f.coeffs();
  const auto& b = g.coeffs();
  Complex acc = a[0] * b[0] + a[n / 2] * b[n / 2];
  for (int m = 1; m < n / 2; ++m) acc += a[m] * b[n - m] + a[n - m] * b[m];
  return f.grid().period() * acc;
}

SpectralField multiply(const SpectralField& a, const SpectralField& b, int pad) {
  if (!(a.grid() == b.grid())) throw DimensionError("multiply: fields live on different grids");
  const int n = a.grid().size();
  const int fine = n * checked_pad(pad);
  const PeriodicGrid fine_grid = a.grid().resized(fine);
  if (a.is_real() && b.is_real()) {
    const Eigen::VectorXd prod =
        synthesize_real(resample(a, fine)).cwiseProduct(synthesize_real(resample(b, fine)));
    return resample(analyze(prod, fine_grid), n);
  }
  const Eigen::VectorXcd prod = synthesize(resample(a, fine)).cwiseProduct(synthesize(resample(b, fine)));
  return resample(analyze(prod, fine_grid), n);
}

SpectralField power(const SpectralField& a, int exponent, int pad) {
  if (exponent < 0) throw ParameterError("power: exponent must be >= 0");
  if (exponent == 0) return SpectralField::constant(a.grid(), 1.0);
  if (exponent == 1) return a;
  return map_pointwise(
      a,
      [exponent](Complex z) {
        Complex acc = z;
        for (int i = 1; i < exponent; ++i) acc *= z;
        return acc;
      },
      a.is_real(), pad);
}

SpectralField map_pointwise(const SpectralField& a, const std::function<Complex(Complex)>& fn,
                            bool real_output, int pad) {
  const int n = a.grid().size();
  const int fine = n * checked_pad(pad);
  const PeriodicGrid fine_grid = a.grid().resized(fine);
  Eigen::VectorXcd values = synthesize(resample(a, fine));
  if (a.is_real()) values = values.real().cast<Complex>();
  for (Eigen::Index j = 0; j < values.size(); ++j) values[j] = fn(values[j]);
  if (real_output) return resample(analyze(Eigen::VectorXd(values.real()), fine_grid), n);
  return resample(analyze(values, fine_grid), n);
}

}  // namespace bo
