#pragma once

#include <span>
#include <stdexcept>

namespace bo {

/// Composite rule on uniformly spaced samples: Simpson when the number of
/// intervals is even, trapezoid otherwise.
inline double composite_quadrature(std::span<const double> values, double h) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("composite_quadrature needs at least two samples");
  const std::size_t intervals = n - 1;
  double acc = 0.0;
  if (intervals % 2 == 0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc += w * values[i];
    }
    return acc * h / 3.0;
  }
  for (std::size_t i = 0; i < n; ++i) acc += (i == 0 || i == intervals) ? 0.5 * values[i] : values[i];
  return acc * h;
}

}  // namespace bo
