#include <cmath>
#include <numbers>

#include "bo/evolution.hpp"
#include "bo/random_field.hpp"
#include "bo/spectral.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace bo;

namespace {

SpectralField cos_field(const PeriodicGrid& g, double a) {
  return SpectralField::from_modes(g, {{1, 0.5 * a}, {-1, 0.5 * a}}, true);
}

SolverConfig config(Equation eq, int k, double dt, double T, Dealias d = Dealias::pad4) {
  SolverConfig c;
  c.equation = eq;
  c.k = k;
  c.dt = dt;
  c.t_final = T;
  c.dealias = d;
  c.sample_stride = int(std::lround(T / dt));
  return c;
}

double l2_dist(const SpectralField& a, const SpectralField& b) { return norm(a - b, Norm::l2()); }

}  // namespace

TEST_CASE("zero and constant data are stationary") {
  const PeriodicGrid g(1.0, 64);
  SolverConfig c = config(Equation::gbo, 2, 1e-2, 1.0);
  c.sample_stride = 10;
  const Trajectory z = solve(SpectralField::zero(g), c);
  CHECK(z.size() == 11);
  for (const auto& s : z.snapshots()) CHECK(s.coeffs().cwiseAbs().maxCoeff() < 1e-14);
  for (int k : {1, 2, 3}) {
    c.k = k;
    const SpectralField c0 = SpectralField::constant(g, 0.7);
    const Trajectory t = solve(c0, c);
    CHECK(max_coeff_diff(t.back(), c0) < 1e-14);
  }
}

TEST_CASE("nonlinear terms match a dense oracle") {
  const PeriodicGrid g(1.3, 32);
  Rng rng(3);
  RandomFieldSpec spec;
  spec.n_modes = 6;
  const SpectralField u = random_field(g, spec, rng);
  const auto f = oracle::evaluator(u);
  const auto fx = oracle::evaluator(differentiate(u, Derivative::d_dx(1)));
  const SpectralField u2 = power(u, 2);
  const double m2 = u2.mean().real();
  const auto ref_gbo2 = oracle::project_dense([&](double x) { return f(x) * f(x) * fx(x); }, g);
  const auto ref_bo2 = oracle::project_dense([&](double x) { return 2.0 * f(x) * fx(x); }, g);
  const auto ref_ren = oracle::project_dense([&](double x) { return 2.0 * (f(x) * f(x) - m2) * fx(x); }, g);
  CHECK(oracle::max_diff(ref_gbo2, nonlinear_term(u, {Equation::gbo, 2}, Dealias::pad4)) < 1e-13);
  CHECK(oracle::max_diff(ref_bo2, nonlinear_term(u, {Equation::bo2, 1}, Dealias::pad4)) < 1e-13);
  CHECK(oracle::max_diff(ref_ren, nonlinear_term(u, {Equation::renormalized_gbo, 2}, Dealias::pad4)) < 1e-13);
  CHECK(nonlinear_term(u, {Equation::linear, 1}, Dealias::pad4).coeffs().isZero());
  // Conservative form leaves the mean mode untouched.
  for (Dealias d : {Dealias::two_thirds, Dealias::none})
    CHECK(std::abs(nonlinear_term(u, {Equation::gbo, 3}, d).mean()) < 1e-16);
  // Two-thirds filter empties |m| > N/3.
  const SpectralField t = nonlinear_term(u, {Equation::gbo, 3}, Dealias::two_thirds);
  for (int m = 11; m <= 16; ++m) CHECK(std::abs(t.coeff(m)) == 0.0);
}

TEST_CASE("step halving shows fourth order on 0.1 cos x") {
  const PeriodicGrid g(1.0, 128);
  const SpectralField u0 = cos_field(g, 0.1);
  auto at = [&](double dt) { return solve(u0, config(Equation::gbo, 1, dt, 0.5)).back(); };
  const SpectralField a = at(0.05), b = at(0.025), c = at(0.0125);
  const double ratio = l2_dist(a, b) / l2_dist(b, c);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.5);
}

TEST_CASE("convergence_order on the fixtures") {
  const PeriodicGrid g(1.0, 128);
  const ConvergenceResult lin = convergence_order(cos_field(g, 1.0), config(Equation::linear, 1, 0.05, 0.5), 4);
  CHECK(lin.exact);
  CHECK(std::isnan(lin.order));
  for (double e : lin.errors) CHECK(e < 1e-12);

  const ConvergenceResult g1 = convergence_order(cos_field(g, 0.1), config(Equation::gbo, 1, 0.05, 0.5), 5);
  CHECK_FALSE(g1.exact);
  CHECK(g1.order >= 3.8);
  CHECK(g1.order <= 4.2);

  const SpectralField u3 = SpectralField::from_modes(
      g, {{1, 0.025}, {-1, 0.025}, {2, Complex(0, -0.025)}, {-2, Complex(0, 0.025)}}, true);
  const ConvergenceResult g3 = convergence_order(u3, config(Equation::gbo, 3, 0.05, 0.5), 5);
  CHECK(g3.order >= 3.8);
  CHECK(g3.order <= 4.2);

  SolverConfig etd = config(Equation::gbo, 1, 0.05, 0.5);
  etd.scheme = Scheme::etd_rk4;
  const ConvergenceResult e = convergence_order(cos_field(g, 0.1), etd, 5);
  CHECK(e.order >= 3.5);
  CHECK(e.order <= 4.5);
  // Both schemes approach the same solution.
  CHECK(l2_dist(solve(cos_field(g, 0.1), etd).back(),
                solve(cos_field(g, 0.1), config(Equation::gbo, 1, 0.05, 0.5)).back()) < 1e-6);
  CHECK_THROWS_AS(convergence_order(cos_field(g, 0.1), etd, 2), ParameterError);
}

TEST_CASE("reality, mean and sampling") {
  const PeriodicGrid g(2.0, 64);
  Rng rng(11);
  RandomFieldSpec spec;
  spec.n_modes = 10;
  spec.mean = 0.3;
  const SpectralField u0 = random_field(g, spec, rng);
  for (Equation eq : {Equation::gbo, Equation::bo2}) {
    SolverConfig c = config(eq, 2, 1e-3, 0.2, Dealias::two_thirds);
    c.sample_stride = 20;
    const Trajectory t = solve(u0, c);
    CHECK(t.size() == 11);
    CHECK(t.times().back() == doctest::Approx(0.2));
    for (const auto& s : t.snapshots()) {
      CHECK(s.is_real());
      CHECK(symmetry_defect(s.coeffs()) < 1e-12);
      CHECK(std::abs(s.mean() - u0.mean()) < 1e-12);
    }
  }
}

TEST_CASE("L2 drift below 1e-10 over T = 1 at N = 256, dt = 1e-4") {
  const PeriodicGrid g(1.0, 256);
  Rng rng(42);
  RandomFieldSpec spec;
  spec.norm = Norm::hs(1);
  spec.norm_value = 1.0;
  const SpectralField u0 = random_field(g, spec, rng);
  SolverConfig c = config(Equation::gbo, 1, 1e-4, 1.0, Dealias::two_thirds);
  c.sample_stride = 1000;
  const Trajectory t = solve(u0, c);
  const double m0 = std::pow(norm(u0, Norm::l2()), 2);
  double drift = 0;
  for (const auto& s : t.snapshots()) drift = std::max(drift, std::abs(std::pow(norm(s, Norm::l2()), 2) - m0) / m0);
  CHECK(drift < 1e-10);
}

TEST_CASE("reflection reverses time") {
  // v(t, x) = u(-t, -x) solves the same equation, so solving from reflect(u(T))
  // returns reflect(u0).
  const PeriodicGrid g(1.0, 128);
  const SpectralField u0 = SpectralField::from_modes(
      g, {{1, 0.1}, {-1, 0.1}, {2, Complex(0.02, -0.05)}, {-2, Complex(0.02, 0.05)}}, true);
  for (int k : {1, 2}) {
    const SolverConfig c = config(Equation::gbo, k, 0.01, 1.0);
    const SpectralField uT = solve(u0, c).back();
    const SpectralField back = reflect(solve(reflect(uT), c).back());
    SolverConfig half = c;
    half.dt = 0.005;
    half.sample_stride = 200;
    const double self = l2_dist(uT, solve(u0, half).back());
    CHECK(l2_dist(back, u0) <= 10.0 * self);
  }
}

TEST_CASE("large data blows up with the last good state") {
  const PeriodicGrid g(1.0, 64);
  SolverConfig c = config(Equation::gbo, 1, 0.01, 1.0);
  c.sample_stride = 1;
  try {
    solve(cos_field(g, 1e4), c);
    FAIL("expected a blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.last_good_time() < 1.0);
    CHECK(e.last_good().coeffs().allFinite());
    CHECK(std::string(e.what()).find("blew up") != std::string::npos);
  }
}

TEST_CASE("solver configuration errors") {
  const PeriodicGrid g(1.0, 32);
  const SpectralField u0 = cos_field(g, 0.1);
  CHECK_THROWS_AS(solve(u0, config(Equation::gbo, 1, 0.0, 1.0)), ParameterError);
  CHECK_THROWS_AS(solve(u0, config(Equation::gbo, 1, 0.1, -1.0)), ParameterError);
  SolverConfig c = config(Equation::gbo, 1, 0.3, 1.0);
  c.sample_stride = 1;
  CHECK_THROWS_AS(solve(u0, c), ParameterError);  // not a whole number of steps
  c = config(Equation::gbo, 1, 0.1, 1.0);
  c.sample_stride = 3;
  CHECK_THROWS_AS(solve(u0, c), ParameterError);
  c.sample_stride = 0;
  CHECK_THROWS_AS(solve(u0, c), ParameterError);
  CHECK_THROWS_AS(solve(u0, config(Equation::gbo, 0, 0.1, 1.0)), ParameterError);
  CHECK_THROWS_AS(solve(u0, config(Equation::gbo, 1, 2.0, 1.0)), ParameterError);
  CHECK_THROWS_AS(solve(u0.as_complex(), config(Equation::gbo, 1, 0.1, 1.0)), PreconditionError);
  const SpectralField shifted = u0 + SpectralField::constant(g, 0.2);
  CHECK_THROWS_AS(solve(shifted, config(Equation::renormalized_gbo, 2, 0.1, 1.0)), PreconditionError);
}

TEST_CASE("pde_residual is small for solved trajectories and large for the wrong tag") {
  const PeriodicGrid g(1.0, 64);
  const SpectralField u0 = cos_field(g, 0.2);
  SolverConfig c = config(Equation::bo2, 1, 1e-3, 0.2);
  c.sample_stride = 5;
  const Trajectory t = solve(u0, c);
  const PdeResidual r = pde_residual(t);
  CHECK(r.max_l2 < 1e-8);
  CHECK(r.max_h1 < 1e-7);
  const Trajectory relabelled(t.times(), t.snapshots(), {Equation::gbo, 1});
  CHECK(pde_residual(relabelled).max_l2 > 1e-3);
  const Trajectory short_traj({0.0, 1.0}, {u0, u0}, {Equation::gbo, 1});
  CHECK_THROWS_AS(pde_residual(short_traj), ParameterError);
}
