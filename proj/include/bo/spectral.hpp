#pragma once

#include <functional>

#include <Eigen/Core>

#include "bo/spectral_field.hpp"

namespace bo {

/// Largest |C_0| accepted by antiderivative.
inline constexpr double kZeroMeanTolerance = 1e-10;
/// Oversampling factor for products and L^p quadrature.
inline constexpr int kDefaultPad = 4;

// --- transforms -----------------------------------------------------------

SpectralField analyze(const Eigen::VectorXd& samples, const PeriodicGrid& grid);
SpectralField analyze(const Eigen::VectorXcd& samples, const PeriodicGrid& grid);
Eigen::VectorXcd synthesize(const SpectralField& f);
/// Point values of a real-flagged field.
Eigen::VectorXd synthesize_real(const SpectralField& f);

/// Change resolution at fixed period: zero-pad or truncate in mode space.
/// The Nyquist coefficient is split evenly between +-N/2 when padding and the
/// two folded back together when truncating, so a round trip is exact.
SpectralField resample(const SpectralField& f, int n_points);

// --- Fourier multipliers --------------------------------------------------
//
// Odd symbols (hilbert, odd derivatives, antiderivative) vanish on the Nyquist
// slot, which keeps real fields real.

/// Multiplier -i sgn(q), zero on q = 0.
SpectralField hilbert(const SpectralField& f);

struct Projection {
  enum class Kind { plus, minus, zero, leq, gt, below };
  Kind kind;
  double cutoff = 0.0;  // physical frequency

  static Projection plus() { return {Kind::plus}; }
  static Projection minus() { return {Kind::minus}; }
  static Projection zero() { return {Kind::zero}; }
  /// |q| <= k.
  static Projection leq(double k) { return {Kind::leq, k}; }
  /// q > k.
  static Projection gt(double k) { return {Kind::gt, k}; }
  /// q < -k, the negative mirror of gt(k).
  static Projection below(double k) { return {Kind::below, k}; }
};

SpectralField project(const SpectralField& f, Projection which);

struct Derivative {
  enum class Kind { d_dx, abs_d, bessel };
  Kind kind;
  double order;

  /// (iq)^n
  static Derivative d_dx(int n = 1) { return {Kind::d_dx, double(n)}; }
  /// |q|^s, i.e. D_x^s
  static Derivative abs_d(double s) { return {Kind::abs_d, s}; }
  /// (1+q^2)^{s/2}, i.e. J_x^s
  static Derivative bessel(double s) { return {Kind::bessel, s}; }
};

SpectralField differentiate(const SpectralField& f, Derivative kind);

/// Zero-mean periodic primitive, multiplier 1/(iq). Throws PreconditionError
/// when |C_0(f)| >= kZeroMeanTolerance.
SpectralField antiderivative(const SpectralField& f);

struct MeanSplit {
  Complex mean;
  SpectralField fluctuation;  // M(f) = f - mean
};

MeanSplit mean_remove(const SpectralField& f);

/// Shorthand for mean_remove(f).fluctuation.
SpectralField fluctuation(const SpectralField& f);

/// Phase multiplier e^{-iq s}: the field translated to f(x - s).
SpectralField translate(const SpectralField& f, double shift);

/// f(-x).
SpectralField reflect(const SpectralField& f);

/// Generic multiplier. The symbol is evaluated at the physical frequency of
/// each slot; the result is flagged complex.
SpectralField apply_symbol(const SpectralField& f, const std::function<Complex(double)>& symbol);

// --- norms ----------------------------------------------------------------

struct Norm {
  enum class Kind { lp, hs, hs_dot, linf };
  Kind kind;
  double param = 0.0;

  static Norm lp(double p) { return {Kind::lp, p}; }
  static Norm l2() { return {Kind::lp, 2.0}; }
  static Norm linf() { return {Kind::linf}; }
  /// (sum (1+q^2)^s |C_q|^2)^{1/2}, no 2 pi lambda factor.
  static Norm hs(double s) { return {Kind::hs, s}; }
  /// (sum_{q != 0} |q|^{2s} |C_q|^2)^{1/2}
  static Norm hs_dot(double s) { return {Kind::hs_dot, s}; }
};

/// L^2 uses Parseval with the 2 pi lambda measure; L^1, L^4 and L^inf use
/// 4x oversampled point values (exact for the quartic of a trigonometric
/// polynomial of the grid's degree).
double norm(const SpectralField& f, Norm which);

/// int_0^{2 pi lambda} f dx.
Complex integral(const SpectralField& f);

/// int f g dx over the period, by Parseval (no conjugation: sum C_q(f) C_{-q}(g)).
Complex pairing(const SpectralField& f, const SpectralField& g);

// --- pseudospectral products ----------------------------------------------
//
// Products are formed pointwise on a grid `pad` times finer and truncated back
// to the operands' grid. pad = 1 forms them on the native grid.

SpectralField multiply(const SpectralField& a, const SpectralField& b, int pad = kDefaultPad);
SpectralField power(const SpectralField& a, int exponent, int pad = kDefaultPad);
SpectralField map_pointwise(const SpectralField& a, const std::function<Complex(Complex)>& fn,
                            bool real_output, int pad = kDefaultPad);

}  // namespace bo
