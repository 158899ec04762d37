#include "bo/random_field.hpp"

#include <cmath>
#include <numbers>

#include "bo/errors.hpp"

namespace bo {

SpectralField random_field(const PeriodicGrid& grid, const RandomFieldSpec& spec, Rng& rng) {
  const double scale = spec.physical_frequency ? grid.lambda() : 1.0;
  const int top = int(std::floor(spec.n_modes * scale + 1e-9));
  if (spec.n_modes < 1 || top < 1 || top >= grid.size() / 2)
    throw ParameterError("random_field: energetic modes must lie in [1, N/2)");
  if (!(spec.decay > 0.0) || !(spec.norm_value >= 0.0)) throw ParameterError("random_field: bad decay or norm");
  std::normal_distribution<double> gauss(0.0, std::numbers::sqrt2 / 2);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(grid.size());
  for (int m = 1; m <= top; ++m) {
    const double re = gauss(rng), im = gauss(rng);
    const Complex z = Complex(re, im) * std::pow(spec.decay, m / scale);
    c[grid.slot(m)] = z;
    c[grid.slot(-m)] = std::conj(z);
  }
  SpectralField f(grid, c, true);
  const double n = norm(f, spec.norm);
  if (n > 0.0) f *= spec.norm_value / n;
  return f + SpectralField::constant(grid, spec.mean);
}

SpectralField random_wave_packet(const PeriodicGrid& grid, const WavePacketSpec& spec, Rng& rng) {
  const double L = grid.period();
  std::uniform_real_distribution<double> width(spec.min_width, spec.max_width);
  std::uniform_real_distribution<double> carrier(-spec.max_carrier, spec.max_carrier);
  std::uniform_real_distribution<double> centre(0.0, L);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  const double sigma = width(rng), xi = carrier(rng), x0 = centre(rng), theta = phase(rng);
  const int images = 1 + int(std::ceil(8 * sigma / L));
  Eigen::VectorXd values(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    double s = 0.0;
    for (int p = -images; p <= images; ++p) {
      const double x = grid.point(j) + p * L;
      s += std::exp(-(x - x0) * (x - x0) / (2 * sigma * sigma)) * std::cos(xi * x + theta);
    }
    values[j] = s;
  }
  SpectralField f = analyze(values, grid);
  const double n = norm(f, Norm::l2());
  if (n == 0.0) throw PreconditionError("random_wave_packet: degenerate packet");
  f *= 1.0 / n;
  return f;
}

std::uint64_t sample_seed(std::uint64_t run_seed, std::uint64_t index) {
  // splitmix64 finalizer over the pair
  std::uint64_t z = run_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace bo
