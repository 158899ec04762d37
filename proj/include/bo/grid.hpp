#pragma once

#include <Eigen/Core>

namespace bo {

/// Uniform collocation grid on the circle of length 2*pi*lambda.
///
/// Collocation points are x_j = 2*pi*lambda*j/N, j = 0..N-1. Fourier slots use
/// the standard transform order: slot i holds mode m = i for i <= N/2 and
/// m = i - N above, so the single Nyquist mode sits at m = +N/2. Physical
/// frequency of mode m is q = m/lambda.
class PeriodicGrid {
 public:
  PeriodicGrid(double lambda, int n_points);

  double lambda() const { return lambda_; }
  int size() const { return n_; }
  double period() const;
  double spacing() const;
  double point(int j) const;

  int mode(Eigen::Index slot) const { return slot <= n_ / 2 ? int(slot) : int(slot) - n_; }
  double frequency(Eigen::Index slot) const { return mode(slot) / lambda_; }
  Eigen::Index slot(int mode) const;
  bool has_mode(int mode) const { return mode > -n_ / 2 && mode <= n_ / 2; }
  Eigen::Index nyquist_slot() const { return n_ / 2; }

  /// Same period, different resolution.
  PeriodicGrid resized(int n_points) const { return {lambda_, n_points}; }

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  double lambda_;
  int n_;
};

}  // namespace bo
