#include "bo/trajectory.hpp"

#include <cmath>

#include "bo/errors.hpp"

namespace bo {

std::string to_string(Equation e) {
  switch (e) {
    case Equation::linear: return "linear";
    case Equation::gbo: return "gbo";
    case Equation::bo2: return "bo2";
    case Equation::renormalized_gbo: return "renormalized_gbo";
  }
  return "unknown";
}

std::string to_string(Scheme s) { return s == Scheme::if_rk4 ? "ifrk4" : "etdrk4"; }

std::string to_string(Dealias d) {
  switch (d) {
    case Dealias::two_thirds: return "two-thirds";
    case Dealias::pad4: return "pad4";
    case Dealias::none: return "none";
  }
  return "unknown";
}

std::string to_string(const EquationTag& tag) {
  if (tag.equation == Equation::gbo || tag.equation == Equation::renormalized_gbo)
    return to_string(tag.equation) + "(" + std::to_string(tag.k) + ")";
  return to_string(tag.equation);
}

Trajectory::Trajectory(std::vector<double> times, std::vector<SpectralField> snapshots, EquationTag tag,
                       SolverInfo info)
    : times_(std::move(times)), snapshots_(std::move(snapshots)), tag_(tag), info_(info) {
  if (snapshots_.size() < 2) throw PreconditionError("a trajectory needs at least 2 snapshots");
  if (times_.size() != snapshots_.size())
    throw DimensionError("trajectory has " + std::to_string(times_.size()) + " times for " +
                         std::to_string(snapshots_.size()) + " snapshots");
  for (const auto& s : snapshots_)
    if (!(s.grid() == snapshots_.front().grid()))
      throw DimensionError("trajectory snapshots live on different grids");
  const double span = times_.back() - times_.front();
  if (span == 0.0) throw PreconditionError("trajectory sample spacing is zero");
  const double h = span / double(times_.size() - 1);
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (std::abs(times_[i] - times_.front() - double(i) * h) > 1e-12 * std::abs(span))
      throw PreconditionError("trajectory sample times are not uniformly spaced");
}

}  // namespace bo
