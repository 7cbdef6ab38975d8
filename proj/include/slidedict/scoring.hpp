#pragma once

#include "slidedict/fusion.hpp"
#include "slidedict/model.hpp"
#include "slidedict/skeleton.hpp"

#include <optional>
#include <span>

namespace slidedict {

struct OfflineResult {
  Decision decision;
  ScoreTrace trace;  // one step per window, step id = window index
};

/// Full-sequence recognition: W windows, each scored against its sliding view.
OfflineResult classify_offline(const ActionSequence& test, const Model& model);

/// Frame-level recognition over a growing stream.
///
/// Frame t is scored once every online window length that can hold t as its
/// middle frame (start >= 0) also ends within the frames received so far;
/// frames are scored in order, one trace step each (step id = t). Frames whose
/// windows never fit use [0, available). `finish` marks the end of the action
/// and flushes the remaining frames.
class OnlineClassifier {
 public:
  explicit OnlineClassifier(Model model);

  void push(const JointFrame& frame);
  /// Same as push(frame) but rejects frames that arrive out of order.
  void push(Eigen::Index frame_index, const JointFrame& frame);
  void push(std::span<const JointFrame> frames);
  void finish();

  Eigen::Index frames_seen() const { return static_cast<Eigen::Index>(frames_.size()); }
  Eigen::Index frames_scored() const { return next_; }
  bool finished() const { return finished_; }
  const ScoreTrace& trace() const { return trace_; }
  /// Empty until the first frame has been scored.
  std::optional<Decision> prediction() const;

  /// Per-class maximum of each probability over a frame's windows, renormalized.
  struct FrameEvidence {
    Eigen::VectorXd p_dict;
    Eigen::VectorXd p_diff;
    Eigen::VectorXd tau;
  };
  const std::vector<FrameEvidence>& evidence() const { return evidence_; }

 private:
  bool ready(Eigen::Index t) const;
  void score(Eigen::Index t);

  Model model_;
  std::vector<JointFrame> frames_;
  std::vector<Baseline> baselines_;
  ScoreTrace trace_;
  std::vector<FrameEvidence> evidence_;
  Eigen::Index next_ = 0;
  bool finished_ = false;
};

/// Column-wise max over candidate vectors, renormalized to sum to one.
Eigen::VectorXd max_probability(std::span<const Eigen::VectorXd> candidates);

}  // namespace slidedict
