#include "bo/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "bo/errors.hpp"

namespace bo {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[4] = {'B', 'O', 'S', 'P'};

class Writer {
 public:
  template <class T>
  void put(T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    out_.append(b, sizeof(T));
  }
  void raw(const char* p, std::size_t n) { out_.append(p, n); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in) : in_(in) {}
  template <class T>
  T get(const char* what) {
    if (pos_ + sizeof(T) > in_.size())
      throw CheckpointTruncatedError(std::string("checkpoint truncated while reading ") + what);
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  void expect_end() const {
    if (pos_ != in_.size())
      throw CheckpointPayloadError("checkpoint has " + std::to_string(in_.size() - pos_) + " trailing bytes");
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  const std::string& in_;
  std::size_t pos_ = 0;
};

struct Header {
  PeriodicGrid grid;
  EquationTag tag;
  double time;
};

void write_header(Writer& w, const PeriodicGrid& g, EquationTag tag, double time) {
  w.raw(kMagic, 4);
  w.put<std::uint32_t>(kCheckpointVersion);
  w.put<double>(g.lambda());
  w.put<std::uint32_t>(std::uint32_t(g.size()));
  w.put<std::uint32_t>(std::uint32_t(tag.k));
  w.put<std::uint8_t>(std::uint8_t(tag.equation));
  w.put<double>(time);
}

Header read_header(Reader& r) {
  char magic[4];
  for (char& c : magic) c = r.get<char>("magic");
  if (std::memcmp(magic, kMagic, 4) != 0) throw CheckpointMagicError("not a checkpoint: bad magic bytes");
  const auto version = r.get<std::uint32_t>("version");
  if (version != kCheckpointVersion) throw CheckpointVersionError(version, kCheckpointVersion);
  const auto lambda = r.get<double>("lambda");
  const auto n = r.get<std::uint32_t>("n_points");
  const auto k = r.get<std::uint32_t>("k");
  const auto eq = r.get<std::uint8_t>("equation");
  const auto time = r.get<double>("time");
  if (eq > std::uint8_t(Equation::renormalized_gbo))
    throw CheckpointPayloadError("unknown equation tag " + std::to_string(eq));
  if (!std::isfinite(time)) throw CheckpointPayloadError("non-finite header time");
  try {
    return {PeriodicGrid(lambda, int(n)), {Equation(eq), int(k)}, time};
  } catch (const ParameterError& e) {
    throw CheckpointPayloadError(std::string("bad grid in header: ") + e.what());
  }
}

void write_coeffs(Writer& w, const SpectralField& f) {
  for (const Complex& c : f.coeffs()) {
    w.put<double>(c.real());
    w.put<double>(c.imag());
  }
}

SpectralField read_coeffs(Reader& r, const PeriodicGrid& g) {
  if (r.remaining() < std::size_t(g.size()) * 16) throw CheckpointTruncatedError("checkpoint truncated in coefficients");
  Eigen::VectorXcd c(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double re = r.get<double>("coefficient");
    const double im = r.get<double>("coefficient");
    if (!std::isfinite(re) || !std::isfinite(im))
      throw CheckpointPayloadError("non-finite coefficient at slot " + std::to_string(i));
    c[i] = {re, im};
  }
  // Real flag is not stored; recover it from the symmetry of the data.
  const bool real = symmetry_defect(c) <= 1e-12;
  return {g, std::move(c), real};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write " + path.string());
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw CheckpointError("write failed for " + path.string());
}

}  // namespace

CheckpointVersionError::CheckpointVersionError(std::uint32_t found, std::uint32_t expected)
    : CheckpointError("checkpoint version " + std::to_string(found) + " is not supported (expected version " +
                      std::to_string(expected) + ")"),
      found_(found),
      expected_(expected) {}

std::string serialize_field(const SpectralField& f, EquationTag tag, double time) {
  Writer w;
  write_header(w, f.grid(), tag, time);
  write_coeffs(w, f);
  return w.take();
}

FieldCheckpoint deserialize_field(const std::string& bytes) {
  Reader r(bytes);
  const Header h = read_header(r);
  SpectralField f = read_coeffs(r, h.grid);
  r.expect_end();
  return {std::move(f), h.tag, h.time};
}

std::string serialize_trajectory(const Trajectory& traj) {
  Writer w;
  write_header(w, traj.grid(), traj.tag(), traj.t_final());
  w.put<std::uint32_t>(std::uint32_t(traj.size()));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    w.put<double>(traj.times()[i]);
    write_coeffs(w, traj[i]);
  }
  return w.take();
}

Trajectory deserialize_trajectory(const std::string& bytes) {
  Reader r(bytes);
  const Header h = read_header(r);
  const auto count = r.get<std::uint32_t>("snapshot count");
  if (r.remaining() < std::size_t(count) * (8 + std::size_t(h.grid.size()) * 16))
    throw CheckpointTruncatedError("checkpoint truncated: " + std::to_string(count) + " snapshots announced");
  std::vector<double> times;
  std::vector<SpectralField> snaps;
  for (std::uint32_t i = 0; i < count; ++i) {
    const double t = r.get<double>("snapshot time");
    if (!std::isfinite(t)) throw CheckpointPayloadError("non-finite snapshot time");
    times.push_back(t);
    snaps.push_back(read_coeffs(r, h.grid));
  }
  r.expect_end();
  try {
    return Trajectory(std::move(times), std::move(snaps), h.tag);
  } catch (const CheckpointError&) {
    throw;
  } catch (const Error& e) {
    throw CheckpointPayloadError(std::string("invalid trajectory payload: ") + e.what());
  }
}

void save_checkpoint(const SpectralField& f, const std::filesystem::path& path, EquationTag tag, double time) {
  write_file(path, serialize_field(f, tag, time));
}

void save_checkpoint(const Trajectory& traj, const std::filesystem::path& path) {
  write_file(path, serialize_trajectory(traj));
}

FieldCheckpoint load_field_checkpoint(const std::filesystem::path& path) { return deserialize_field(read_file(path)); }

Trajectory load_trajectory_checkpoint(const std::filesystem::path& path) {
  return deserialize_trajectory(read_file(path));
}

}  // namespace bo
