#pragma once

#include <Eigen/Core>

namespace bo::detail {

// Forward transform normalized so that slot 0 is the sample mean:
// out[i] = (1/N) sum_j in[j] e^{-2 pi i i j / N}.
Eigen::VectorXcd forward(const Eigen::VectorXcd& values);

// Inverse of forward: out[j] = sum_i in[i] e^{2 pi i i j / N}.
Eigen::VectorXcd inverse(const Eigen::VectorXcd& coeffs);

}  // namespace bo::detail
