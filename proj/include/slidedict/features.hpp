#pragma once

#include "slidedict/skeleton.hpp"

#include <Eigen/Dense>

#include <span>
#include <stdexcept>

namespace slidedict {

/// Unit-norm (or all-zero, for degenerate windows) upper-triangular
/// covariance-of-joints vector of dimension J(J+1)/2.
template <typename Scalar>
struct CovDescriptorT {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
  int source_window = 0;
};
using CovDescriptor = CovDescriptorT<double>;

inline Eigen::Index descriptor_dimension(Eigen::Index joints) { return joints * (joints + 1) / 2; }

/// (S - M)(S - M)^T where every row of M is the per-axis mean over joints.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> frame_scatter(
    const Eigen::MatrixBase<Derived>& frame) {
  const auto centered = (frame.rowwise() - frame.colwise().mean()).eval();
  return centered * centered.transpose();
}

/// Mean joint scatter over a window of frames, before vectorization.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> window_covariance(
    std::span<const JointFrameT<Scalar>> frames) {
  if (frames.empty()) throw std::invalid_argument("covariance of an empty window");
  const auto joints = frames.front().rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cov =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(joints, joints);
  for (const auto& f : frames) {
    if (f.rows() != joints) throw std::invalid_argument("window frames disagree on joint count");
    cov.noalias() += frame_scatter(f);
  }
  return cov / static_cast<Scalar>(frames.size());
}

/// Row-major upper triangle (diagonal included) of a square matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> upper_triangle(
    const Eigen::MatrixBase<Derived>& m) {
  const auto n = m.rows();
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(descriptor_dimension(n));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) out(k++) = m(i, j);
  return out;
}

template <typename Scalar>
CovDescriptorT<Scalar> covariance_descriptor(std::span<const JointFrameT<Scalar>> frames,
                                             int source_window = 0) {
  CovDescriptorT<Scalar> d{upper_triangle(window_covariance(frames)), source_window};
  const Scalar norm = d.values.norm();
  if (norm < Scalar(1e-12))
    d.values.setZero();
  else
    d.values /= norm;
  return d;
}

inline CovDescriptor covariance_descriptor(const std::vector<JointFrame>& frames, int source_window = 0) {
  return covariance_descriptor(std::span<const JointFrame>(frames), source_window);
}

}  // namespace slidedict
