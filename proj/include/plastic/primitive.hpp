#pragma once

#include <Eigen/Core>

namespace plastic {

/// Some power of the 0/1 pattern of m is strictly positive. Powers up to the
/// Wielandt bound (n-1)^2 + 1 are tested.
template <typename Derived>
bool is_primitive_matrix(const Eigen::MatrixBase<Derived> &m)
{
  auto const n = m.rows();
  if (n == 0 || m.cols() != n) {
    return false;
  }
  Eigen::MatrixXi pattern = (m.array() != typename Derived::Scalar(0)).template cast<int>();
  Eigen::MatrixXi power = pattern;
  auto const exponent = (n - 1) * (n - 1) + 1;
  for (Eigen::Index k = 1; k < exponent; ++k) {
    power = (power * pattern).unaryExpr([](int v) { return v > 0 ? 1 : 0; });
  }
  return (power.array() > 0).all();
}

} // namespace plastic
