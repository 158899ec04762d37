#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bo/spectral_field.hpp"

namespace bo {

/// Right-hand side convention of a simulated equation, all of the form
/// u_t + H u_xx = RHS.
enum class Equation : std::uint8_t {
  linear = 0,            // RHS = 0
  gbo = 1,               // RHS = u^k u_x
  bo2 = 2,               // RHS = 2 u u_x
  renormalized_gbo = 3,  // RHS = 2 M(u^k) u_x
};

enum class Scheme : std::uint8_t { if_rk4, etd_rk4 };
enum class Dealias : std::uint8_t { two_thirds, pad4, none };

struct EquationTag {
  Equation equation = Equation::gbo;
  int k = 1;

  friend bool operator==(const EquationTag&, const EquationTag&) = default;
};

std::string to_string(Equation e);
std::string to_string(Scheme s);
std::string to_string(Dealias d);
std::string to_string(const EquationTag& tag);

struct SolverInfo {
  Scheme scheme = Scheme::if_rk4;
  double dt = 0.0;
  Dealias dealias = Dealias::pad4;
};

/// Uniformly sampled solution history. Every snapshot lives on the same grid.
class Trajectory {
 public:
  Trajectory(std::vector<double> times, std::vector<SpectralField> snapshots, EquationTag tag,
             SolverInfo info = {});

  const PeriodicGrid& grid() const { return snapshots_.front().grid(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<SpectralField>& snapshots() const { return snapshots_; }
  const SpectralField& operator[](std::size_t i) const { return snapshots_[i]; }
  std::size_t size() const { return snapshots_.size(); }
  const SpectralField& front() const { return snapshots_.front(); }
  const SpectralField& back() const { return snapshots_.back(); }
  double sample_spacing() const { return (times_.back() - times_.front()) / double(times_.size() - 1); }
  double t_final() const { return times_.back(); }
  const EquationTag& tag() const { return tag_; }
  const SolverInfo& solver() const { return info_; }

 private:
  std::vector<double> times_;
  std::vector<SpectralField> snapshots_;
  EquationTag tag_;
  SolverInfo info_;
};

}  // namespace bo
