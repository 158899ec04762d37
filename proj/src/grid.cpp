#include "bo/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bo/errors.hpp"

namespace bo {

PeriodicGrid::PeriodicGrid(double lambda, int n_points) : lambda_(lambda), n_(n_points) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ParameterError("grid lambda must be positive and finite, got " + std::to_string(lambda));
  if (n_points < 8 || n_points % 2 != 0)
    throw ParameterError("grid n_points must be even and >= 8, got " + std::to_string(n_points));
}

double PeriodicGrid::period() const { return 2.0 * std::numbers::pi * lambda_; }

double PeriodicGrid::spacing() const { return period() / n_; }

double PeriodicGrid::point(int j) const { return period() * j / n_; }

Eigen::Index PeriodicGrid::slot(int m) const {
  if (!has_mode(m)) throw ParameterError("mode " + std::to_string(m) + " not representable on grid");
  return m >= 0 ? m : m + n_;
}

}  // namespace bo
