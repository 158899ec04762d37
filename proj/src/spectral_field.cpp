#include "bo/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bo/errors.hpp"

namespace bo {
namespace {

constexpr double kRealTolerance = 1e-12;

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b) {
  if (!(a == b)) throw DimensionError("fields live on different grids");
}

}  // namespace

SpectralField::SpectralField(PeriodicGrid grid, Eigen::VectorXcd coeffs, bool is_real)
    : grid_(grid), coeffs_(std::move(coeffs)), is_real_(is_real) {
  if (coeffs_.size() != grid_.size())
    throw DimensionError("coefficient count " + std::to_string(coeffs_.size()) +
                         " does not match grid size " + std::to_string(grid_.size()));
  if (is_real_) {
    const double defect = symmetry_defect(coeffs_);
    if (!(defect <= kRealTolerance))
      throw PreconditionError("real-flagged field is not conjugate symmetric (defect " +
                              std::to_string(defect) + ")");
  }
}

SpectralField SpectralField::zero(const PeriodicGrid& grid, bool is_real) {
  return {grid, Eigen::VectorXcd::Zero(grid.size()), is_real};
}

SpectralField SpectralField::constant(const PeriodicGrid& grid, Complex value) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(grid.size());
  c[0] = value;
  return {grid, std::move(c), value.imag() == 0.0};
}

SpectralField SpectralField::from_modes(const PeriodicGrid& grid,
                                        std::initializer_list<std::pair<int, Complex>> modes,
                                        bool is_real) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(grid.size());
  for (const auto& [m, value] : modes) c[grid.slot(m)] += value;
  return {grid, std::move(c), is_real};
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  coeffs_ += other.coeffs_;
  is_real_ = is_real_ && other.is_real_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  coeffs_ -= other.coeffs_;
  is_real_ = is_real_ && other.is_real_;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

SpectralField operator*(Complex s, const SpectralField& a) {
  return {a.grid(), a.coeffs() * s, a.is_real() && s.imag() == 0.0};
}

double symmetry_defect(const Eigen::VectorXcd& coeffs) {
  const Eigen::Index n = coeffs.size();
  const double scale = coeffs.size() ? coeffs.cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) return 0.0;
  double worst = std::abs(coeffs[0].imag());
  if (n % 2 == 0) worst = std::max(worst, std::abs(coeffs[n / 2].imag()));
  for (Eigen::Index i = 1; i < (n + 1) / 2; ++i)
    worst = std::max(worst, std::abs(coeffs[n - i] - std::conj(coeffs[i])));
  return worst / scale;
}

double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid(), b.grid());
  return (a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff();
}

}  // namespace bo
