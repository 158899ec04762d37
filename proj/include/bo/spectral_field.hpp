#pragma once

#include <complex>
#include <initializer_list>
#include <utility>

#include <Eigen/Core>

#include "bo/grid.hpp"

namespace bo {

using Complex = std::complex<double>;

/// One space snapshot stored as Fourier coefficients C_q(f) in transform order.
///
/// The normalization is C_q(f) = (1/2 pi lambda) int f e^{-iqx} dx, so coeff(0)
/// is the mean value. A real-flagged field is conjugate symmetric with a real
/// Nyquist coefficient; the constructor rejects real-flagged input that is not.
class SpectralField {
 public:
  SpectralField(PeriodicGrid grid, Eigen::VectorXcd coeffs, bool is_real);

  static SpectralField zero(const PeriodicGrid& grid, bool is_real = true);
  static SpectralField constant(const PeriodicGrid& grid, Complex value);
  /// Field with the listed (mode, coefficient) pairs and zeros elsewhere.
  static SpectralField from_modes(const PeriodicGrid& grid,
                                  std::initializer_list<std::pair<int, Complex>> modes,
                                  bool is_real);

  const PeriodicGrid& grid() const { return grid_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  bool is_real() const { return is_real_; }
  Eigen::Index size() const { return coeffs_.size(); }

  Complex coeff(int mode) const { return coeffs_[grid_.slot(mode)]; }
  Complex mean() const { return coeffs_[0]; }

  /// Same coefficients flagged complex.
  SpectralField as_complex() const { return {grid_, coeffs_, false}; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend SpectralField operator*(Complex s, const SpectralField& a);
  friend SpectralField operator-(const SpectralField& a) { return -1.0 * a; }

 private:
  PeriodicGrid grid_;
  Eigen::VectorXcd coeffs_;
  bool is_real_;
};

/// Largest violation of C_{-m} = conj(C_m) (and Im C_{N/2} = 0), relative to max |C|.
double symmetry_defect(const Eigen::VectorXcd& coeffs);

/// Largest coefficient-wise discrepancy between two fields on the same grid.
double max_coeff_diff(const SpectralField& a, const SpectralField& b);

}  // namespace bo
