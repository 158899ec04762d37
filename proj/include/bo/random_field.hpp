#pragma once

#include <cstdint>
#include <random>

#include "bo/spectral.hpp"

namespace bo {

using Rng = std::mt19937_64;

struct RandomFieldSpec {
  int n_modes = 16;           // modes 1..n_modes carry energy
  double decay = 0.7;         // r in g_m r^{|m|}
  Norm norm = Norm::hs(1.0);  // normalization of the fluctuation
  double norm_value = 1.0;
  double mean = 0.0;
  // When set, n_modes and decay refer to physical frequency: modes with
  // |q| <= n_modes carry energy and C_m decays like r^{|q|}. This keeps the
  // ensemble statistically alike across periods.
  bool physical_frequency = false;
};

/// Real field with C_m = g_m r^{|m|} (g_m standard complex Gaussian) for
/// 1 <= m <= n_modes, conjugate mirrored, Nyquist slot left at zero, the fluctuation rescaled to
/// norm_value in spec.norm, then the mean added.
SpectralField random_field(const PeriodicGrid& grid, const RandomFieldSpec& spec, Rng& rng);

struct WavePacketSpec {
  double min_width = 0.3;  // Gaussian envelope width, physical units
  double max_width = 1.0;
  double max_carrier = 3.0;  // |xi| bound on the carrier frequency
};

/// Real Gaussian packet exp(-(x - x0)^2 / 2 sigma^2) cos(xi x + theta),
/// periodized and normalized to unit L^2. Width, carrier, centre and phase are
/// drawn uniformly.
SpectralField random_wave_packet(const PeriodicGrid& grid, const WavePacketSpec& spec, Rng& rng);

/// Seed for sample i of a run, so samples are independent of scheduling.
std::uint64_t sample_seed(std::uint64_t run_seed, std::uint64_t index);

}  // namespace bo
