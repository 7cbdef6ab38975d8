#pragma once

#include <Eigen/Core>

#include <vector>

namespace slidedict {

/// Convex weights for the dictionary and joint-difference probabilities.
class FusionWeights {
 public:
  FusionWeights() = default;
  /// Normalizes so the weights sum to one; both must be nonnegative, not both zero.
  FusionWeights(double dict_weight, double diff_weight);
  /// dict weight in [0, 1]; the other is 1 - mu1.
  static FusionWeights from_dict_weight(double mu1);

  double dict() const { return mu1_; }
  double diff() const { return mu2_; }

 private:
  double mu1_ = 0.5;
  double mu2_ = 0.5;
};

/// tau = mu1 * p_dict + mu2 * p_diff
Eigen::VectorXd fuse(const Eigen::VectorXd& p_dict, const Eigen::VectorXd& p_diff, const FusionWeights& weights);

/// Per-step fused scores and their running per-class sum.
class ScoreTrace {
 public:
  ScoreTrace() = default;
  explicit ScoreTrace(int class_count);

  void append(long step, const Eigen::VectorXd& tau);

  int class_count() const { return static_cast<int>(cumulative_.size()); }
  std::size_t steps_seen() const { return taus_.size(); }
  bool empty() const { return taus_.empty(); }
  const std::vector<Eigen::VectorXd>& taus() const { return taus_; }
  const std::vector<long>& steps() const { return steps_; }
  const Eigen::VectorXd& cumulative() const { return cumulative_; }
  /// Running sums after each step, in order.
  const std::vector<Eigen::VectorXd>& cumulative_history() const { return history_; }

  bool operator==(const ScoreTrace& other) const;

 private:
  std::vector<Eigen::VectorXd> taus_;
  std::vector<Eigen::VectorXd> history_;
  std::vector<long> steps_;
  Eigen::VectorXd cumulative_;
};

struct Decision {
  int label = 0;
  Eigen::VectorXd confidence;  // softmax of the cumulative scores
};

/// argmax_c prod_w exp(tau_w(c)), evaluated as argmax_c sum_w tau_w(c).
/// Ties go to the lowest class index.
Decision decide(const ScoreTrace& trace);

}  // namespace slidedict
