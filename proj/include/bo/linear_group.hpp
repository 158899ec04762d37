#pragma once

#include "bo/spectral_field.hpp"

namespace bo {

enum class GroupKind {
  bo_group,           // V(t): u_t + H u_xx = 0, multiplier exp(-i q|q| t)
  schrodinger_group,  // U(t): w_t = i w_xx, multiplier exp(-i q^2 t)
};

/// Exact free evolution by a unimodular Fourier multiplier.
SpectralField propagate(const SpectralField& f, double t, GroupKind kind = GroupKind::bo_group);

/// ||V(t) phi||_{L^4_{[0,T]} L^4_lambda} by composite Simpson quadrature over
/// n_t equal time intervals (n_t + 1 samples), with the 4x oversampled
/// spatial L^4 norm at every sample.
double strichartz_norm(const SpectralField& phi, double T, int n_t);

struct StrichartzEstimate {
  double value;
  int n_t;         // intervals used by the accepted estimate
  bool converged;  // successive doublings agreed to rel_tol
};

/// Doubles n_t from n_t0 until two successive values differ by less than
/// rel_tol (relative) or n_t_max is reached.
StrichartzEstimate strichartz_norm_converged(const SpectralField& phi, double T, double rel_tol = 1e-6,
                                             int n_t0 = 256, int n_t_max = 1 << 16);

}  // namespace bo
