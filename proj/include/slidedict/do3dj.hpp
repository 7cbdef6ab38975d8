#pragma once

#include "slidedict/probability.hpp"
#include "slidedict/skeleton.hpp"
#include "slidedict/windowing.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace slidedict {

/// First-frame offset between a test and a training sequence.
struct Baseline {
  JointFrame beta;
};

struct DiffScore {
  Eigen::VectorXd values;  // S_{w,c}, one per class
  int window = 0;
  int pool_size = 0;  // L
};

/// beta = test.frames[0] - train.frames[0].
Baseline baseline(const ActionSequence& test, const ActionSequence& train);
Baseline baseline(const JointFrame& test_first, const JointFrame& train_first);

/// Frobenius norm of test - train - beta.
template <typename DerivedA, typename DerivedB, typename DerivedC>
typename DerivedA::Scalar frame_pair_distance(const Eigen::MatrixBase<DerivedA>& test_frame,
                                              const Eigen::MatrixBase<DerivedB>& train_frame,
                                              const Eigen::MatrixBase<DerivedC>& beta) {
  return (test_frame - train_frame - beta).norm();
}

inline double frame_pair_distance(const JointFrame& test_frame, const JointFrame& train_frame,
                                  const Baseline& b) {
  return frame_pair_distance(test_frame, train_frame, b.beta);
}

/// Frames of a training sequence that fall in windows w-N .. w+N of its own
/// segmentation, as a half-open range.
Window training_frame_range(Eigen::Index frame_count, int w, const WindowSpec& spec);

/// Mean of the min(L, |pool|) smallest distances, where the pool runs over
/// every training sequence of one class, every frame of its windows w-N..w+N
/// and every frame of the test window. `baselines[k]` pairs with `train_class[k]`.
double class_diff_score(std::span<const JointFrame> test_window, std::span<const ActionSequence> train_class,
                        int w, const WindowSpec& spec, std::span<const Baseline> baselines, int pool_size);

/// Mean of the L smallest entries of a pool (L clamped to the pool size).
double mean_of_smallest(std::vector<double> pool, int pool_size);

inline Eigen::VectorXd diff_probabilities(const DiffScore& scores, double eps = kDefaultProbabilityFloor) {
  return inverse_error_probabilities(scores.values, eps);
}

}  // namespace slidedict
