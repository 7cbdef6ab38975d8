#pragma once

#include "slidedict/do3dj.hpp"
#include "slidedict/fusion.hpp"
#include "slidedict/lasso.hpp"
#include "slidedict/sparse.hpp"
#include "slidedict/windowing.hpp"

#include <memory>
#include <span>
#include <vector>

namespace slidedict {

struct ModelParams {
  WindowSpec windows;
  LassoOptions lasso;
  double eps = kDefaultProbabilityFloor;
  int pool_size = 3;  // L
  FusionWeights fusion;

  void validate() const;
};

/// Both per-class probability vectors for one test window.
struct WindowEvidence {
  ClassErrors errors;
  DiffScore scores;
  Eigen::VectorXd p_dict;
  Eigen::VectorXd p_diff;
};

/// Trained recognizer state: the dictionary, the training sequences used by
/// the joint-difference score, and cached per-window sliding views. Immutable
/// once built; copies share state and can be used from several threads.
class Model {
 public:
  /// Builds the dictionary. The reference length defaults to the lower median
  /// of the training sequence lengths.
  static Model train(std::span<const ActionSequence> train, const ModelParams& params);

  /// Reassembles a model from stored parts.
  Model(Dictionary dict, std::vector<ActionSequence> training, const ModelParams& params,
        Eigen::Index reference_length);

  const Dictionary& dictionary() const { return state_->dict; }
  const ModelParams& params() const { return state_->params; }
  const LabelSet& labels() const { return state_->dict.labels; }
  int class_count() const { return state_->dict.class_count(); }
  Eigen::Index joint_count() const { return state_->joints; }
  Eigen::Index reference_length() const { return state_->reference_length; }

  /// Training sequences grouped by class index, stable within a class.
  std::span<const ActionSequence> training() const { return state_->training; }
  std::span<const ActionSequence> class_training(int label) const;

  /// One baseline per training sequence, in `training()` order, from the
  /// first frame of a test sequence.
  std::vector<Baseline> baselines(const JointFrame& test_first) const;

  /// Cached sliding view centred on dictionary window w.
  const SlidingView& view(int w) const;

  /// Descriptor, sparse code, reconstruction errors and difference scores for
  /// the frames of one test window matched against dictionary window w.
  WindowEvidence evaluate_window(std::span<const JointFrame> frames, int w,
                                 std::span<const Baseline> baselines) const;

 private:
  struct ViewCache {
    SlidingView view;
    Eigen::MatrixXd atoms;
    Eigen::MatrixXd gram;
  };
  struct State {
    Dictionary dict;
    std::vector<ActionSequence> training;
    std::vector<std::size_t> class_offsets;  // C + 1 entries
    ModelParams params;
    Eigen::Index reference_length = 1;
    Eigen::Index joints = 0;
    std::vector<ViewCache> views;
  };
  std::shared_ptr<const State> state_;
};

}  // namespace slidedict
