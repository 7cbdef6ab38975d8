#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slidedict {

inline constexpr double kDefaultProbabilityFloor = 1e-12;

/// P(c) = (1/max(r_c, eps)) / sum_k (1/max(r_k, eps)) over nonnegative
/// errors or distances; lower values get more mass.
///
/// The inputs are first rescaled by the power of two nearest above their
/// maximum. That rescale is exact in binary floating point, so multiplying the
/// inputs by any power of two leaves the output bit-identical, and the floor
/// acts on values relative to the largest one. All-zero input is uniform.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> inverse_error_probabilities(
    const Eigen::MatrixBase<Derived>& values, typename Derived::Scalar eps = kDefaultProbabilityFloor) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = values.size();
  if (n == 0) throw std::invalid_argument("probabilities over an empty class set");
  if ((values.array() < 0).any() || !values.allFinite())
    throw std::invalid_argument("probabilities need finite nonnegative inputs");

  const Scalar top = values.maxCoeff();
  if (top == 0) return Vec::Constant(n, Scalar(1) / static_cast<Scalar>(n));
  int exponent = 0;
  std::frexp(top, &exponent);
  Vec inv(n);
  for (Eigen::Index c = 0; c < n; ++c) inv(c) = Scalar(1) / std::max(std::ldexp(values(c), -exponent), eps);
  return inv / inv.sum();
}

}  // namespace slidedict
