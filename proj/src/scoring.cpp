#include "slidedict/scoring.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace slidedict {

FusionWeights::FusionWeights(double dict_weight, double diff_weight) {
  if (!(dict_weight >= 0) || !(diff_weight >= 0) || dict_weight + diff_weight <= 0)
    throw std::invalid_argument("fusion weights must be nonnegative and not both zero");
  const double total = dict_weight + diff_weight;
  mu1_ = dict_weight / total;
  mu2_ = 1.0 - mu1_;
}

FusionWeights FusionWeights::from_dict_weight(double mu1) {
  if (!(mu1 >= 0 && mu1 <= 1)) throw std::invalid_argument("fusion.mu1 must lie in [0, 1]");
  return FusionWeights(mu1, 1.0 - mu1);
}

Eigen::VectorXd fuse(const Eigen::VectorXd& p_dict, const Eigen::VectorXd& p_diff, const FusionWeights& weights) {
  if (p_dict.size() != p_diff.size()) throw std::invalid_argument("fuse: class-set mismatch");
  return weights.dict() * p_dict + weights.diff() * p_diff;
}

ScoreTrace::ScoreTrace(int class_count) : cumulative_(Eigen::VectorXd::Zero(class_count)) {
  if (class_count < 1) throw std::invalid_argument("score trace needs at least one class");
}

void ScoreTrace::append(long step, const Eigen::VectorXd& tau) {
  if (tau.size() != cumulative_.size()) throw std::invalid_argument("score trace: class-count mismatch");
  taus_.push_back(tau);
  steps_.push_back(step);
  cumulative_ += tau;
  history_.push_back(cumulative_);
}

bool ScoreTrace::operator==(const ScoreTrace& other) const {
  if (steps_ != other.steps_ || cumulative_.size() != other.cumulative_.size()) return false;
  for (std::size_t i = 0; i < taus_.size(); ++i)
    if (taus_[i] != other.taus_[i] || history_[i] != other.history_[i]) return false;
  return cumulative_ == other.cumulative_;
}

Decision decide(const ScoreTrace& trace) {
  if (trace.empty()) throw std::invalid_argument("decide: empty trace");
  const auto& cum = trace.cumulative();
  Decision d;
  for (Eigen::Index c = 1; c < cum.size(); ++c)
    if (cum(c) > cum(d.label)) d.label = static_cast<int>(c);
  const Eigen::ArrayXd shifted = (cum.array() - cum(d.label)).exp();
  d.confidence = shifted.matrix() / shifted.sum();
  return d;
}

OfflineResult classify_offline(const ActionSequence& test, const Model& model) {
  if (test.frames.empty()) throw std::invalid_argument("classify_offline: empty sequence");
  if (test.joint_count() != model.joint_count())
    throw std::invalid_argument("classify_offline: sequence has " + std::to_string(test.joint_count()) +
                                " joints, model expects " + std::to_string(model.joint_count()));
  const auto baselines = model.baselines(test.frames.front());
  const auto& params = model.params();
  OfflineResult result{{}, ScoreTrace(model.class_count())};
  for (const auto& win : segment(test.frame_count(), params.windows.count)) {
    std::span<const JointFrame> frames(test.frames.data() + win.start, static_cast<std::size_t>(win.size()));
    const auto ev = model.evaluate_window(frames, win.index, baselines);
    result.trace.append(win.index, fuse(ev.p_dict, ev.p_diff, params.fusion));
  }
  result.decision = decide(result.trace);
  return result;
}

Eigen::VectorXd max_probability(std::span<const Eigen::VectorXd> candidates) {
  if (candidates.empty()) throw std::invalid_argument("max_probability: no candidates");
  Eigen::VectorXd best = candidates.front();
  for (const auto& p : candidates.subspan(1)) best = best.cwiseMax(p);
  return best / best.sum();
}

OnlineClassifier::OnlineClassifier(Model model) : model_(std::move(model)), trace_(model_.class_count()) {}

void OnlineClassifier::push(const JointFrame& frame) {
  if (finished_) throw std::logic_error("stream already finished");
  if (frame.rows() != model_.joint_count() || !frame.allFinite())
    throw std::invalid_argument("stream frame has the wrong joint count or non-finite coordinates");
  if (frames_.empty()) baselines_ = model_.baselines(frame);
  frames_.push_back(frame);
  while (next_ < frames_seen() && ready(next_)) score(next_++);
}

void OnlineClassifier::push(Eigen::Index frame_index, const JointFrame& frame) {
  if (frame_index != frames_seen())
    throw std::invalid_argument("out-of-order frame " + std::to_string(frame_index) + ", expected " +
                                std::to_string(frames_seen()));
  push(frame);
}

void OnlineClassifier::push(std::span<const JointFrame> frames) {
  for (const auto& f : frames) push(f);
}

void OnlineClassifier::finish() {
  if (finished_) return;
  finished_ = true;
  while (next_ < frames_seen()) score(next_++);
}

bool OnlineClassifier::ready(Eigen::Index t) const {
  for (int len : model_.params().windows.online_lengths) {
    if (t - len / 2 < 0) continue;  // never fits
    if (t + (len + 1) / 2 > frames_seen()) return false;
  }
  return true;
}

void OnlineClassifier::score(Eigen::Index t) {
  const auto& params = model_.params();
  const int w = progress_to_window(t, model_.reference_length(), params.windows.count);
  std::vector<Eigen::VectorXd> dict_probs;
  std::vector<Eigen::VectorXd> diff_probs;
  for (const auto& win : centered_windows(t, frames_seen(), params.windows)) {
    std::span<const JointFrame> frames(frames_.data() + win.start, static_cast<std::size_t>(win.size()));
    auto ev = model_.evaluate_window(frames, w, baselines_);
    dict_probs.push_back(std::move(ev.p_dict));
    diff_probs.push_back(std::move(ev.p_diff));
  }
  FrameEvidence fe;
  fe.p_dict = max_probability(dict_probs);
  fe.p_diff = max_probability(diff_probs);
  fe.tau = fuse(fe.p_dict, fe.p_diff, params.fusion);
  trace_.append(static_cast<long>(t), fe.tau);
  evidence_.push_back(std::move(fe));
}

std::optional<Decision> OnlineClassifier::prediction() const {
  if (trace_.empty()) return std::nullopt;
  return decide(trace_);
}

}  // namespace slidedict
