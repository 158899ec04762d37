#pragma once

#include "bo/spectral_field.hpp"
#include "bo/trajectory.hpp"

namespace bo {

/// bo:  u_t + H u_xx = 2 u u_x with zero mean, F = d_x^{-1} u, w = -i P+(e^{-iF} u).
/// gbo: v_t + H v_xx = 2 M(v^k) v_x,        F = d_x^{-1} M(v^k), w = P+(e^{-iF} v).
enum class GaugeVariant { bo, gbo };

struct GaugeState {
  SpectralField F;      // real, zero mean
  SpectralField phase;  // e^{-iF}, formed on the 4x grid and truncated
  SpectralField W;      // P+(e^{-iF})
  SpectralField w;
  GaugeVariant variant;
  int k;
};

/// e^{sign * i F}, evaluated pointwise on the 4x padded grid then truncated.
SpectralField phase_factor(const SpectralField& F, double sign = -1.0);

GaugeState build_gauge(const SpectralField& v, GaugeVariant variant, int k = 1);

/// max_x | |e^{-iF(x)}| - 1 | over the collocation points of the truncated phase.
double phase_unit_defect(const GaugeState& g);

/// v(t,x) = u(t, x - c t) - gamma with gamma the conserved mean and c the
/// drift of the tag (gamma for gbo(1), 2 gamma for bo2).
Trajectory remove_mean_bo(const Trajectory& u);

/// v(t,x) = 2^{-1/k} u(t, x - s(t)), s(t) = int_0^t mean(u^k), integrated by
/// the trapezoid rule on the sample times. Output is tagged renormalized_gbo(k).
Trajectory renormalize_gbo(const Trajectory& u);

struct BoRhs {
  SpectralField dispersive;  // -2 d_x P+(P-(u_x) e^{-iF})
  SpectralField mean_term;   // P0(u^2) P+(u e^{-iF})
  SpectralField total;
};

/// Right-hand side of w_t - i w_xx for the bo gauge.
BoRhs rhs_bo(const SpectralField& u, const SpectralField& F);

struct GboTerms {
  SpectralField a;  //  i P0(M(v^k)^2) P+(e^{-iF} v)
  SpectralField b;  // -2i P+(e^{-iF} P-(v_xx))
  SpectralField c;  // -2k P+(e^{-iF} v M(v^{k-1} P-(v_x)))
  SpectralField d;  // -i k(k-1) P+(e^{-iF} v h)
  SpectralField h;  //  d_x^{-1} M(v^{k-2} v_x H v_x), zero for k = 1
  SpectralField total() const { return a + b + c + d; }
};

/// The four terms of w_t - i w_xx for the gbo gauge.
GboTerms rhs_gbo_terms(const SpectralField& v, int k);

struct ResidualNorms {
  double l2 = 0.0;
  double h1 = 0.0;
};

/// ||w_t - i w_xx - RHS|| at one instant, with v_t taken from the PDE and w_t,
/// F_t by the chain rule. No time stepping is involved.
ResidualNorms gauge_residual(const SpectralField& v, GaugeVariant variant, int k = 1);

/// Same residual along a trajectory (bo2 for bo, renormalized_gbo(k) for gbo),
/// with w_t from fourth-order centred differences. Maximum over samples 2..n-3.
ResidualNorms gauge_residual(const Trajectory& traj, GaugeVariant variant, int k = 1);

/// e^{iF}(i w) + e^{iF} P-(e^{-iF} v); equals v for the bo gauge.
SpectralField reconstruct_u(const GaugeState& gauge, const SpectralField& v);

struct LipschitzGap {
  double gap = 0.0;          // ||e^{-iF1} - e^{-iF2}||_inf
  double bound_ratio = 0.0;  // gap / (lambda^{1/2} ||phi1 - phi2||_{L^2})
  bool degenerate = false;   // phi1 == phi2
};

LipschitzGap gauge_lipschitz_gap(const SpectralField& phi1, const SpectralField& phi2, GaugeVariant variant,
                                 int k = 1);

}  // namespace bo
