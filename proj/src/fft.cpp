#include "fft.hpp"

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace bo::detail {
namespace {

// Eigen::FFT caches twiddle tables and is not safe to share across threads.
Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::Unscaled);
    return f;
  }();
  return fft;
}

}  // namespace

Eigen::VectorXcd forward(const Eigen::VectorXcd& values) {
  Eigen::VectorXcd out(values.size());
  engine().fwd(out.data(), values.data(), values.size());
  out /= double(values.size());
  return out;
}

Eigen::VectorXcd inverse(const Eigen::VectorXcd& coeffs) {
  Eigen::VectorXcd out(coeffs.size());
  engine().inv(out.data(), coeffs.data(), coeffs.size());
  return out;
}

}  // namespace bo::detail
