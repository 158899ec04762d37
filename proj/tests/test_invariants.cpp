#include <cmath>
#include <numbers>

#include "bo/evolution.hpp"
#include "bo/invariants.hpp"
#include "bo/random_field.hpp"
#include "bo/spectral.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace bo;
using std::numbers::pi;

namespace {

SpectralField cos_field(const PeriodicGrid& g, double a = 1.0) {
  return SpectralField::from_modes(g, {{1, 0.5 * a}, {-1, 0.5 * a}}, true);
}

SolverConfig config(Equation eq, int k, double dt, double T, int stride) {
  SolverConfig c;
  c.equation = eq;
  c.k = k;
  c.dt = dt;
  c.t_final = T;
  c.dealias = Dealias::pad4;
  c.sample_stride = stride;
  return c;
}

Trajectory frozen(const SpectralField& f, int n, double T = 1.0) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = T * i / (n - 1);
  return {t, std::vector<SpectralField>(n, f), {Equation::linear, 1}};
}

}  // namespace

TEST_CASE("invariant values for cos x") {
  const PeriodicGrid g(1.0, 32);
  const SpectralField c = cos_field(g);
  CHECK(std::abs(invariant(c, Invariant::I())) < 1e-15);
  CHECK(invariant(c, Invariant::M()) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(invariant(c, Invariant::F_bo(kFboNegativeQuartic)) == doctest::Approx(29 * pi / 32).epsilon(1e-13));
  CHECK(invariant(c, Invariant::F_bo()) == doctest::Approx(35 * pi / 32).epsilon(1e-13));
  CHECK(invariant(c, Invariant::E_gbo(2)) == doctest::Approx(7 * pi / 16).epsilon(1e-13));
  CHECK(invariant(c, Invariant::E_gbo(2, +1)) == doctest::Approx(9 * pi / 16).epsilon(1e-13));

  // Dense oracle for F with the negative quartic: u_x^2 - 3/4 u^2 H u_x - 1/8 u^4 with H u_x = cos x.
  const double dense = oracle::integral(
                           [](double x) {
                             const double u = std::cos(x), ux = -std::sin(x);
                             return ux * ux - 0.75 * u * u * u - 0.125 * std::pow(u, 4);
                           },
                           1.0)
                           .real();
  CHECK(dense == doctest::Approx(29 * pi / 32).epsilon(1e-12));
  CHECK_THROWS_AS(invariant(c.as_complex(), Invariant::M()), PreconditionError);
}

TEST_CASE("invariants of random fields against dense quadrature") {
  const PeriodicGrid g(1.5, 64);
  Rng rng(9);
  RandomFieldSpec spec;
  spec.n_modes = 10;
  spec.mean = 0.2;
  const SpectralField u = random_field(g, spec, rng);
  const auto f = oracle::evaluator(u);
  const auto fx = oracle::evaluator(differentiate(u, Derivative::d_dx(1)));
  const auto hfx = oracle::evaluator(hilbert(differentiate(u, Derivative::d_dx(1))));
  const double L = 1.5;
  auto I = [&](const oracle::Fn& fn) { return oracle::integral(fn, L).real(); };
  CHECK(invariant(u, Invariant::I()) == doctest::Approx(I(f)).epsilon(1e-12));
  CHECK(invariant(u, Invariant::M()) == doctest::Approx(I([&](double x) { return f(x) * f(x); })).epsilon(1e-12));
  const double F = I([&](double x) {
    const Complex v = f(x);
    return fx(x) * fx(x) - 0.75 * v * v * hfx(x) + 0.125 * v * v * v * v;
  });
  CHECK(invariant(u, Invariant::F_bo()) == doctest::Approx(F).epsilon(1e-12));
  // int |D^{1/2} u|^2 = int u H u_x.
  const double E3 = I([&](double x) { return 0.5 * f(x) * hfx(x) - std::pow(f(x), 5) / 20.0; });
  CHECK(invariant(u, Invariant::E_gbo(3)) == doctest::Approx(E3).epsilon(1e-12));
}

TEST_CASE("drift reports") {
  const PeriodicGrid g(1.0, 64);
  const InvariantReport zero = drift_report(solve(SpectralField::zero(g), config(Equation::gbo, 1, 0.01, 0.5, 10)));
  for (const auto& s : zero.series) CHECK(s.drift == 0.0);
  CHECK(zero.times.size() == 6);

  Rng rng(4);
  const SpectralField u0 = random_field(g, RandomFieldSpec{}, rng);
  const InvariantReport lin = drift_report(solve(u0, config(Equation::linear, 1, 0.01, 1.0, 10)));
  CHECK(lin.series.size() == 2);
  CHECK(lin.at("M").drift < 1e-13);
  CHECK_THROWS_AS(lin.at("F"), ParameterError);

  const Trajectory ref = solve(cos_field(g, 0.2), config(Equation::gbo, 1, 1e-3, 1.0, 50));
  const InvariantReport r = drift_report(ref);
  CHECK(r.at("I").drift < 1e-10);
  CHECK(r.at("M").drift < 1e-10);
  CHECK(r.at("F").drift < 1e-6);
  CHECK(drift_report(ref, FboSigns{+1, +1}).at("F").drift >= 1e-2);

  // bo2 solutions are gbo(1) solutions halved; F is scored on 2u.
  const Trajectory half = solve(cos_field(g, 0.1), config(Equation::bo2, 1, 1e-3, 1.0, 50));
  CHECK(drift_report(half).at("F").drift < 1e-6);

  const InvariantReport e = drift_report(solve(cos_field(g, 0.2), config(Equation::gbo, 2, 1e-3, 0.5, 50)));
  CHECK(e.at("E").drift < 1e-6);
  CHECK(relative_drift({2.0, 2.0, 2.1}) == doctest::Approx(0.05));
  CHECK(relative_drift({0.0, 1e-9}) == doctest::Approx(0.1));
}

TEST_CASE("energy sign separation at k = 2") {
  const PeriodicGrid g(1.0, 128);
  const Trajectory t = solve(cos_field(g, 1.0), config(Equation::gbo, 2, 1e-3, 1.0, 50));
  const auto drift = [&](int sign) {
    std::vector<double> v;
    for (const auto& s : t.snapshots()) v.push_back(invariant(s, Invariant::E_gbo(2, sign)));
    return relative_drift(v);
  };
  CHECK(drift(-1) < 1e-6);
  CHECK(drift(+1) >= 1e-2);
}

TEST_CASE("calibrate_fbo picks the conserved signs") {
  const PeriodicGrid g(1.0, 64);
  const SolverConfig c = config(Equation::gbo, 1, 1e-3, 1.0, 50);
  const FboCalibration cal = calibrate_fbo(cos_field(g, 0.2), c);
  CHECK(cal.selected.convention == Equation::gbo);
  CHECK(cal.selected.signs == kFboConserved);
  CHECK(cal.selected.drift < 1e-6);
  CHECK(cal.opposite_cubic_drift >= 1e-2);
  CHECK(cal.negative_quartic_drift > 1e-5);
  CHECK(cal.candidates.size() == 4);
  const Trajectory wrong = solve(cos_field(g, 0.2), config(Equation::bo2, 1, 1e-3, 0.1, 10));
  CHECK_THROWS_AS(calibrate_fbo(wrong, c), PreconditionError);
}

TEST_CASE("xnorm closed forms") {
  const PeriodicGrid g(1.0, 32);
  const double x0 = std::sqrt(pi) + std::pow(0.75 * pi, 0.25);
  CHECK(xnorm(frozen(SpectralField::zero(g), 5), 0) == 0.0);
  CHECK(xnorm(frozen(cos_field(g), 5), 0) == doctest::Approx(x0).epsilon(1e-12));
  CHECK(xnorm(frozen(cos_field(g), 8), 1) == doctest::Approx(2 * x0).epsilon(1e-12));
  CHECK(xnorm(frozen(cos_field(g), 8), 2) == doctest::Approx(3 * x0).epsilon(1e-12));
  CHECK_THROWS_AS(xnorm(frozen(cos_field(g), 5), 3), ParameterError);
  CHECK_THROWS_AS(xnorm(frozen(cos_field(g), 5), -1), ParameterError);

  Rng rng(12);
  const SpectralField u0 = random_field(g, RandomFieldSpec{.n_modes = 8}, rng);
  const Trajectory t = solve(u0, config(Equation::gbo, 1, 1e-2, 0.5, 5));
  const double a = xnorm(t, 0), b = xnorm(t, 1), c = xnorm(t, 2);
  CHECK(a <= b);
  CHECK(b <= c);
}

TEST_CASE("h1 a priori check") {
  const PeriodicGrid g(1.0, 64);
  Rng rng(5);
  const SpectralField u0 = random_field(g, RandomFieldSpec{}, rng);
  CHECK(h1_apriori_check(solve(u0, config(Equation::linear, 1, 0.01, 1.0, 10))).max_ratio ==
        doctest::Approx(1.0).epsilon(1e-12));
  const AprioriCheck bo = h1_apriori_check(solve(cos_field(g, 0.2), config(Equation::gbo, 1, 1e-3, 1.0, 50)));
  CHECK_FALSE(bo.degenerate);
  CHECK(bo.max_ratio < 2.0);
  CHECK(h1_apriori_check(solve(SpectralField::zero(g), config(Equation::gbo, 1, 0.1, 1.0, 1))).degenerate);
}

TEST_CASE("dilation") {
  const PeriodicGrid g(1.0, 32);
  Rng rng(6);
  const SpectralField f = random_field(g, RandomFieldSpec{.n_modes = 8}, rng);
  CHECK(max_coeff_diff(dilate(f, 1.0, DilationVariant::bo), f) == 0.0);
  CHECK(max_coeff_diff(dilate(f, 1.0, DilationVariant::gbo, 3), f) == 0.0);

  const SpectralField d = dilate(cos_field(g), 4.0, DilationVariant::bo);
  CHECK(d.grid().lambda() == 4.0);
  CHECK(norm(d, Norm::l2()) == doctest::Approx(std::sqrt(pi) / 2).epsilon(1e-14));
  const SpectralField d2 = dilate(cos_field(g), 4.0, DilationVariant::gbo, 2, 64);
  CHECK(d2.grid().size() == 64);
  CHECK(std::abs(d2.coeff(1) - 0.25) < 1e-15);  // 4^{-1/2} * 1/2
  // Pointwise: d(x) = f(x / 4) / 4.
  const auto fd = oracle::evaluator(dilate(f, 4.0, DilationVariant::bo));
  const auto ff = oracle::evaluator(f);
  for (double x : {0.0, 1.0, 7.5, 20.0}) CHECK(std::abs(fd(x) - ff(x / 4) / 4.0) < 1e-14);

  CHECK_THROWS_AS(dilate(f, 0.5, DilationVariant::bo), ParameterError);
  CHECK_THROWS_AS(dilate(f, 2.0, DilationVariant::bo, 1, 16), ParameterError);
}

TEST_CASE("solve and dilate commute") {
  const PeriodicGrid g(1.0, 64);
  const double lam = 2.0;
  for (int k : {1, 2}) {
    const auto variant = k == 1 ? DilationVariant::bo : DilationVariant::gbo;
    const SpectralField u0 = cos_field(g, 0.1);
    const SpectralField a = dilate(solve(u0, config(Equation::gbo, k, 1e-3, 0.25, 250)).back(), lam, variant, k);
    const SpectralField b =
        solve(dilate(u0, lam, variant, k), config(Equation::gbo, k, 1e-3, lam * lam * 0.25, 1000)).back();
    CHECK(norm(a - b, Norm::hs(1)) < (k == 1 ? 1e-8 : 1e-7));
  }
}

TEST_CASE("L2 part of the X norm scales as lambda^{-1/2} under dilation") {
  const PeriodicGrid g(1.0, 32);
  Rng rng(15);
  const SpectralField u0 = random_field(g, RandomFieldSpec{.n_modes = 8}, rng);
  const Trajectory t = solve(u0, config(Equation::linear, 1, 0.01, 0.5, 5));
  for (double lam : {2.0, 4.0}) {
    const Trajectory td =
        solve(dilate(u0, lam, DilationVariant::bo), config(Equation::linear, 1, 0.01 * lam * lam, 0.5 * lam * lam, 5));
    double sup = 0, sup_d = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      sup = std::max(sup, norm(t[i], Norm::l2()));
      sup_d = std::max(sup_d, norm(td[i], Norm::l2()));
      CHECK(max_coeff_diff(dilate(t[i], lam, DilationVariant::bo), td[i]) < 1e-13);
    }
    CHECK(sup_d == doctest::Approx(sup / std::sqrt(lam)).epsilon(1e-10));
  }
}
