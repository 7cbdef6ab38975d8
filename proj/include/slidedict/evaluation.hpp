#pragma once

#include "slidedict/model.hpp"
#include "slidedict/scoring.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace slidedict {

struct EvalReport {
  std::vector<std::string> classes;
  Eigen::MatrixXi confusion;  // rows = truth, columns = prediction
  double accuracy = 0.0;
  Eigen::VectorXd per_class_accuracy;
  std::vector<double> fractions;  // accuracy-vs-frames curve, when streamed
  std::vector<double> curve;
};

/// Truth/prediction pairs as class indices; -1 means "no prediction".
EvalReport summarize(const std::vector<std::string>& classes, std::span<const int> truth,
                     std::span<const int> predicted);

/// Runs fn(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

struct OfflineOutcome {
  std::string id;
  int truth = -1;
  OfflineResult result;
};

/// Labels of test sequences must be known to the model.
std::vector<OfflineOutcome> evaluate_offline(const Model& model, std::span<const ActionSequence> tests, int workers);

struct StreamOutcome {
  std::string id;
  int truth = -1;
  std::vector<int> predictions;  // one per fraction, -1 before any frame is scored
  ScoreTrace trace;              // after the end-of-action signal
};

/// Replays a sequence frame by frame, recording the prediction once
/// ceil(q * F) frames have arrived for each q (q = 1 includes `finish`).
StreamOutcome replay_stream(const Model& model, const ActionSequence& seq, std::span<const double> fractions);

std::vector<StreamOutcome> evaluate_stream(const Model& model, std::span<const ActionSequence> tests,
                                           std::span<const double> fractions, int workers);

/// "0.1..1.0" (steps of 0.1) or a comma-separated list; values in (0, 1], sorted.
std::vector<double> parse_fractions(const std::string& text);

void write_confusion_csv(std::ostream& out, const EvalReport& report);
void write_summary(std::ostream& out, const EvalReport& report);
void write_curve_csv(std::ostream& out, const EvalReport& report);

}  // namespace slidedict
