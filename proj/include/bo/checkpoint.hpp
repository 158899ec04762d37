#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "bo/errors.hpp"
#include "bo/spectral_field.hpp"
#include "bo/trajectory.hpp"

namespace bo {

// Little-endian binary layout:
//   "BOSP" | u32 version | f64 lambda | u32 n_points | u32 k | u8 equation | f64 time
// A field follows with n_points (f64 re, f64 im) pairs in transform order.
// A trajectory follows with u32 count, then per snapshot f64 time and the pairs;
// the header time is the final sample time.

inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public Error {
 public:
  using Error::Error;
};
class CheckpointMagicError : public CheckpointError {
 public:
  using CheckpointError::CheckpointError;
};
class CheckpointVersionError : public CheckpointError {
 public:
  CheckpointVersionError(std::uint32_t found, std::uint32_t expected);
  std::uint32_t found() const { return found_; }
  std::uint32_t expected() const { return expected_; }

 private:
  std::uint32_t found_, expected_;
};
class CheckpointTruncatedError : public CheckpointError {
 public:
  using CheckpointError::CheckpointError;
};
class CheckpointPayloadError : public CheckpointError {
 public:
  using CheckpointError::CheckpointError;
};

struct FieldCheckpoint {
  SpectralField field;
  EquationTag tag;
  double time = 0.0;
};

std::string serialize_field(const SpectralField& f, EquationTag tag = {}, double time = 0.0);
FieldCheckpoint deserialize_field(const std::string& bytes);
std::string serialize_trajectory(const Trajectory& traj);
Trajectory deserialize_trajectory(const std::string& bytes);

void save_checkpoint(const SpectralField& f, const std::filesystem::path& path, EquationTag tag = {},
                     double time = 0.0);
void save_checkpoint(const Trajectory& traj, const std::filesystem::path& path);
FieldCheckpoint load_field_checkpoint(const std::filesystem::path& path);
Trajectory load_trajectory_checkpoint(const std::filesystem::path& path);

}  // namespace bo
