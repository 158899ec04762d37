#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "oracle.hpp"

#include "bo/errors.hpp"
#include "bo/random_field.hpp"
#include "bo/spectral.hpp"

using namespace bo;
using std::numbers::pi;

namespace {

const PeriodicGrid g1(1.0, 32);

SpectralField cosx(const PeriodicGrid& g, int m = 1, double a = 1.0) {
  return SpectralField::from_modes(g, {{m, a / 2}, {-m, a / 2}}, true);
}
SpectralField sinx(const PeriodicGrid& g, int m = 1, double a = 1.0) {
  return SpectralField::from_modes(g, {{m, Complex(0, -a / 2)}, {-m, Complex(0, a / 2)}}, true);
}

SpectralField random_real(const PeriodicGrid& g, std::uint64_t seed, double mean = 0.0) {
  Rng rng(seed);
  RandomFieldSpec s;
  s.n_modes = std::min(16, g.size() / 2 - 1);
  s.mean = mean;
  return random_field(g, s, rng);
}

}  // namespace

TEST_CASE("grid validates parameters and maps modes") {
  CHECK_THROWS_AS(PeriodicGrid(0.0, 16), ParameterError);
  CHECK_THROWS_AS(PeriodicGrid(1.0, 6), ParameterError);
  CHECK_THROWS_AS(PeriodicGrid(1.0, 17), ParameterError);
  const PeriodicGrid g(2.0, 16);
  CHECK(g.spacing() == doctest::Approx(2 * pi * 2.0 / 16).epsilon(1e-15));
  CHECK(g.mode(0) == 0);
  CHECK(g.mode(8) == 8);
  CHECK(g.mode(9) == -7);
  CHECK(g.slot(-7) == 9);
  CHECK(g.frequency(3) == doctest::Approx(1.5));
  CHECK_THROWS(g.slot(9));
}

TEST_CASE("analyze: single mode and constant") {
  Eigen::VectorXcd s(g1.size());
  for (int j = 0; j < g1.size(); ++j) s[j] = std::polar(1.0, g1.point(j));
  const SpectralField f = analyze(s, g1);
  for (int i = 0; i < g1.size(); ++i) CHECK(std::abs(f.coeffs()[i] - Complex(i == 1 ? 1.0 : 0.0)) < 1e-14);

  const SpectralField c = analyze(Eigen::VectorXd(Eigen::VectorXd::Constant(g1.size(), 3.0)), g1);
  CHECK(std::abs(c.coeff(0) - 3.0) < 1e-15);
  CHECK(c.coeffs().tail(g1.size() - 1).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(c.is_real());
}

TEST_CASE("analyze matches direct summation and round-trips at N = 64") {
  const PeriodicGrid g(1.0, 64);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  Eigen::VectorXd s(64);
  std::vector<Complex> sc(64);
  for (int j = 0; j < 64; ++j) sc[j] = s[j] = n01(rng);
  const SpectralField f = analyze(s, g);
  const auto ref = oracle::direct_dft(sc);
  CHECK(oracle::max_diff(ref, f) < 1e-14);
  CHECK(std::abs(ref[32] - f.coeffs()[32]) < 1e-14);
  const Eigen::VectorXd back = synthesize_real(f);
  CHECK((back - s).cwiseAbs().maxCoeff() < 1e-12 * s.cwiseAbs().maxCoeff());

  Eigen::VectorXcd z(64);
  for (int j = 0; j < 64; ++j) z[j] = Complex(n01(rng), n01(rng));
  const Eigen::VectorXcd zb = synthesize(analyze(z, g));
  CHECK((zb - z).cwiseAbs().maxCoeff() < 1e-12 * z.cwiseAbs().maxCoeff());
}

TEST_CASE("analyze rejects a length mismatch") {
  CHECK_THROWS_AS(analyze(Eigen::VectorXd(Eigen::VectorXd::Zero(10)), g1), DimensionError);
  CHECK_THROWS_AS(SpectralField(g1, Eigen::VectorXcd::Zero(10), false), DimensionError);
}

TEST_CASE("synthesis agrees with direct evaluation of the series") {
  const PeriodicGrid g(3.0, 32);
  const SpectralField f = random_real(g, 11);
  std::vector<Complex> c(f.coeffs().begin(), f.coeffs().end());
  const auto ref = oracle::direct_synthesis(c);
  const Eigen::VectorXcd v = synthesize(f);
  for (int j = 0; j < 32; ++j) CHECK(std::abs(v[j] - ref[j]) < 1e-13);
}

TEST_CASE("hilbert examples") {
  CHECK(max_coeff_diff(hilbert(cosx(g1)), sinx(g1)) < 1e-15);
  CHECK(hilbert(SpectralField::constant(g1, 4.0)).coeffs().cwiseAbs().maxCoeff() == 0.0);
  const SpectralField f = SpectralField::constant(g1, 2.0) + cosx(g1);
  CHECK(max_coeff_diff(hilbert(hilbert(f)), -cosx(g1)) < 1e-15);
  CHECK(hilbert(f).is_real());
}

TEST_CASE("projections") {
  const SpectralField p = project(cosx(g1), Projection::plus());
  CHECK(std::abs(p.coeff(1) - 0.5) < 1e-15);
  CHECK(std::abs(p.coeff(-1)) == 0.0);

  const SpectralField u2 = multiply(cosx(g1), cosx(g1));
  const SpectralField p0 = project(u2, Projection::zero());
  CHECK(std::abs(p0.coeff(0) - 0.5) < 1e-15);
  CHECK(p0.coeffs().tail(g1.size() - 1).cwiseAbs().maxCoeff() < 1e-16);

  const SpectralField f = SpectralField::from_modes(g1, {{-2, 1.0}, {0, 5.0}, {3, 1.0}}, false);
  const SpectralField sum = project(f, Projection::plus()) + project(f, Projection::minus()) +
                            project(f, Projection::zero());
  CHECK(sum.coeffs() == f.coeffs());

  // cutoffs are physical frequencies: at lambda = 2, mode 3 is q = 1.5
  const PeriodicGrid g2(2.0, 32);
  const SpectralField h = SpectralField::from_modes(g2, {{2, 1.0}, {3, 1.0}, {-3, 1.0}}, false);
  CHECK(std::abs(project(h, Projection::leq(1.0)).coeff(2) - 1.0) < 1e-16);
  CHECK(std::abs(project(h, Projection::leq(1.0)).coeff(3)) == 0.0);
  CHECK(std::abs(project(h, Projection::gt(1.0)).coeff(3) - 1.0) < 1e-16);
  CHECK(std::abs(project(h, Projection::gt(1.0)).coeff(-3)) == 0.0);
  CHECK(std::abs(project(h, Projection::below(1.0)).coeff(-3) - 1.0) < 1e-16);
}

TEST_CASE("derivatives") {
  const SpectralField e1 = SpectralField::from_modes(g1, {{1, 1.0}}, false);
  const SpectralField e2 = SpectralField::from_modes(g1, {{2, 1.0}}, false);
  CHECK(max_coeff_diff(differentiate(e1, Derivative::abs_d(0.5)), e1) < 1e-15);
  CHECK(std::abs(differentiate(e2, Derivative::abs_d(0.5)).coeff(2) - std::sqrt(2.0)) < 1e-15);
  CHECK(max_coeff_diff(differentiate(sinx(g1), Derivative::d_dx(1)), cosx(g1)) < 1e-15);
  CHECK(std::abs(differentiate(e1, Derivative::bessel(2)).coeff(1) - 2.0) < 1e-15);
  CHECK_THROWS_AS(differentiate(e1, Derivative::abs_d(-1)), ParameterError);
  CHECK_THROWS_AS(differentiate(e1, Derivative::bessel(-0.5)), ParameterError);
  CHECK_THROWS_AS(differentiate(e1, Derivative::d_dx(-1)), ParameterError);
  const SpectralField r = random_real(g1, 3, 1.0);
  for (Derivative d : {Derivative::d_dx(1), Derivative::d_dx(2), Derivative::abs_d(0.5), Derivative::bessel(1)}) {
    const SpectralField out = differentiate(r, d);
    CHECK(out.is_real());
    CHECK(symmetry_defect(out.coeffs()) < 1e-13);
  }
  CHECK(std::abs(differentiate(r, Derivative::abs_d(0.5)).coeff(0)) == 0.0);
}

TEST_CASE("antiderivative") {
  CHECK(max_coeff_diff(antiderivative(cosx(g1)), sinx(g1)) < 1e-15);
  try {
    antiderivative(SpectralField::constant(g1, 1.0));
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("|C_0|") != std::string::npos);
  }
  const SpectralField f = random_real(PeriodicGrid(2.0, 64), 5);
  const SpectralField back = differentiate(antiderivative(f), Derivative::d_dx(1));
  CHECK(max_coeff_diff(back, f) < 1e-12);
  CHECK(std::abs(antiderivative(f).coeff(0)) == 0.0);
}

TEST_CASE("mean removal") {
  const MeanSplit s = mean_remove(SpectralField::constant(g1, 2.0) + cosx(g1));
  CHECK(std::abs(s.mean - 2.0) < 1e-15);
  CHECK(max_coeff_diff(s.fluctuation, cosx(g1)) < 1e-15);
  const MeanSplit z = mean_remove(SpectralField::zero(g1, true));
  CHECK(z.mean == Complex(0));
  CHECK(z.fluctuation.coeffs().cwiseAbs().maxCoeff() == 0.0);
  const SpectralField m = fluctuation(power(cosx(g1), 2));
  CHECK(max_coeff_diff(m, cosx(g1, 2, 0.5)) < 1e-15);
}

TEST_CASE("norm examples") {
  const SpectralField e1 = SpectralField::from_modes(g1, {{1, 1.0}}, false);
  for (double s : {0.0, 0.5, 1.0, 2.0}) CHECK(norm(e1, Norm::hs(s)) == doctest::Approx(std::pow(2.0, s / 2)).epsilon(1e-14));
  CHECK(norm(cosx(g1), Norm::l2()) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
  const double l4_dense =
      std::pow(oracle::integral([](double x) { return std::pow(std::cos(x), 4); }, 1.0).real(), 0.25);
  CHECK(l4_dense == doctest::Approx(std::pow(3 * pi / 4, 0.25)).epsilon(1e-13));
  CHECK(norm(cosx(g1), Norm::lp(4)) == doctest::Approx(l4_dense).epsilon(1e-13));
  CHECK(norm(cosx(g1), Norm::linf()) == doctest::Approx(1.0).epsilon(1e-13));
  const double l1_dense = oracle::integral([](double x) { return std::abs(std::cos(x)); }, 1.0).real();
  CHECK(l1_dense == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(norm(cosx(g1), Norm::lp(1)) == doctest::Approx(4.0).epsilon(1e-3));
  CHECK_THROWS_AS(norm(e1, Norm::lp(3)), ParameterError);
}

TEST_CASE("products match pointwise dense evaluation") {
  const PeriodicGrid g(1.5, 64);
  const SpectralField a = random_real(g, 21), b = random_real(g, 22, 0.3);
  const auto fa = oracle::evaluator(a), fb = oracle::evaluator(b);
  const auto ref = oracle::project_dense([&](double x) { return fa(x) * fb(x); }, g);
  CHECK(oracle::max_diff(ref, multiply(a, b)) < 1e-13);
  const auto ref3 = oracle::project_dense([&](double x) { return std::pow(fa(x), 3); }, g);
  CHECK(oracle::max_diff(ref3, power(a, 3)) < 1e-13);
  CHECK(power(a, 0).coeffs() == SpectralField::constant(g, 1.0).coeffs());
  CHECK(multiply(a, b).is_real());
}

TEST_CASE("resample round trip, translate and reflect") {
  const PeriodicGrid g(1.0, 32);
  const SpectralField f = random_real(g, 31);
  CHECK(resample(resample(f, 128), 32).coeffs() == f.coeffs());
  const SpectralField t = translate(cosx(g), pi / 2);  // cos(x - pi/2) = sin x
  CHECK(max_coeff_diff(t, sinx(g)) < 1e-15);
  CHECK(max_coeff_diff(reflect(sinx(g)), -sinx(g)) < 1e-16);
  CHECK(integral(cosx(g) + SpectralField::constant(g, 1.0)).real() == doctest::Approx(2 * pi));
}

TEST_CASE("property suite over 100 random fields") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double lambda = 1.0 + double(seed % 5);
    const PeriodicGrid g(lambda, 64);
    const SpectralField f = random_real(g, 1000 + seed);
    const SpectralField h = random_real(g, 2000 + seed);

    // multipliers commute
    const auto d = Derivative::d_dx(1 + int(seed % 3));
    CHECK(max_coeff_diff(hilbert(differentiate(f, d)), differentiate(hilbert(f), d)) < 1e-13);

    // Parseval
    const double direct = 2 * pi * lambda * f.coeffs().squaredNorm();
    const double l2 = norm(f, Norm::l2());
    CHECK(std::abs(l2 * l2 - direct) <= 1e-12 * direct);
    const double quad = oracle::integral([&, e = oracle::evaluator(f)](double x) { return std::norm(e(x)); },
                                         lambda, 512)
                            .real();
    CHECK(std::abs(l2 * l2 - quad) <= 1e-12 * quad);

    // partitions are exact
    const SpectralField shifted = f + SpectralField::constant(g, 0.7);
    CHECK((project(shifted, Projection::plus()) + project(shifted, Projection::minus()) +
           project(shifted, Projection::zero()))
              .coeffs() == shifted.coeffs());
    const double k = 0.5 + double(seed % 4);
    CHECK((project(shifted, Projection::leq(k)) + project(shifted, Projection::gt(k)) +
           project(shifted, Projection::below(k)))
              .coeffs() == shifted.coeffs());

    // Hilbert antisymmetry
    const double lhs = pairing(f, hilbert(h)).real(), rhs = -pairing(hilbert(f), h).real();
    CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(lhs)));

    // real in, real out, with small symmetry defect
    for (const SpectralField& out : {hilbert(f), differentiate(f, Derivative::abs_d(0.5)), antiderivative(f),
                                     project(f, Projection::leq(2.0)), multiply(f, h), power(f, 3),
                                     translate(f, 0.3), reflect(f), fluctuation(shifted)}) {
      CHECK(out.is_real());
      CHECK(symmetry_defect(out.coeffs()) < 1e-13);
    }
  }
}
