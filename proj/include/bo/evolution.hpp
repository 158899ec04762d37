#pragma once

#include <vector>

#include "bo/errors.hpp"
#include "bo/trajectory.hpp"

namespace bo {

/// Largest coefficient magnitude tolerated before a run is declared blown up.
inline constexpr double kBlowUpThreshold = 1e8;

struct SolverConfig {
  Equation equation = Equation::gbo;
  int k = 1;
  double dt = 1e-3;
  double t_final = 1.0;
  Scheme scheme = Scheme::if_rk4;
  Dealias dealias = Dealias::two_thirds;
  int sample_stride = 1;  // steps between stored snapshots

  EquationTag tag() const { return {equation, k}; }
};

/// Raised when a coefficient turns non-finite or exceeds kBlowUpThreshold.
/// Carries the last state that passed the check.
class BlowUpError : public Error {
 public:
  BlowUpError(double last_good_time, SpectralField last_good);

  double last_good_time() const { return last_good_time_; }
  const SpectralField& last_good() const { return last_good_; }

 private:
  double last_good_time_;
  SpectralField last_good_;
};

/// Fourier-side right-hand side N(u) of u_t = -H u_xx + N(u), in conservative
/// form d_x(...) so the mean mode is untouched.
SpectralField nonlinear_term(const SpectralField& u, EquationTag tag, Dealias dealias);

/// Integrates u_t + H u_xx = N(u) on [0, t_final] with an integrating factor
/// (exp(i q|q| t) u_hat) or exponential time differencing, both fourth order.
/// Snapshots are stored every sample_stride steps, including t = 0 and t_final;
/// t_final must be a whole number of steps and of strides.
Trajectory solve(const SpectralField& u0, const SolverConfig& cfg);

struct ConvergenceResult {
  double order = 0.0;  // least-squares slope of log(error) against log(dt); NaN when exact
  bool exact = false;  // every level agreed with the finest to 1e-12
  std::vector<double> dts;
  std::vector<double> errors;  // L^2 distance to the finest level at t_final, one per coarse level
};

/// Self-convergence study: solves at dt, dt/2, ..., dt/2^{n_levels-1}.
ConvergenceResult convergence_order(const SpectralField& u0, const SolverConfig& cfg, int n_levels);

}  // namespace bo

namespace bo {

struct PdeResidual {
  double max_l2 = 0.0;  // over interior samples
  double max_h1 = 0.0;
};

/// Residual of u_t + H u_xx - N(u) along a trajectory, with u_t from fourth-order
/// centred differences of the snapshots (needs >= 5 samples) and N(u) from the
/// trajectory's tag with 4x padded products. Evaluated at samples 2..n-3.
PdeResidual pde_residual(const Trajectory& traj);

/// Fourth-order centred difference (f[i-2] - 8 f[i-1] + 8 f[i+1] - f[i+2]) / (12 h).
SpectralField centred_time_derivative(const std::vector<SpectralField>& snaps, std::size_t i, double h);

}  // namespace bo
