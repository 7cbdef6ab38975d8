#include "slidedict/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace slidedict {

namespace {

int truth_index(const Model& model, const ActionSequence& seq) {
  if (!seq.label) throw std::invalid_argument("test sequence '" + seq.id + "' has no label");
  const int idx = model.labels().index_of(*seq.label);
  if (idx < 0) throw std::invalid_argument("test label '" + *seq.label + "' is not a model class");
  return idx;
}

}  // namespace

EvalReport summarize(const std::vector<std::string>& classes, std::span<const int> truth,
                     std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("summarize: size mismatch");
  const auto C = static_cast<Eigen::Index>(classes.size());
  EvalReport report;
  report.classes = classes;
  report.confusion = Eigen::MatrixXi::Zero(C, C);
  std::size_t correct = 0;
  Eigen::VectorXi row_totals = Eigen::VectorXi::Zero(C);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= C) throw std::invalid_argument("summarize: truth label out of range");
    ++row_totals(truth[i]);
    if (predicted[i] < 0) continue;  // counted in the row total only
    ++report.confusion(truth[i], predicted[i]);
    if (predicted[i] == truth[i]) ++correct;
  }
  report.accuracy = truth.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(truth.size());
  report.per_class_accuracy = Eigen::VectorXd::Zero(C);
  for (Eigen::Index c = 0; c < C; ++c)
    if (row_totals(c) > 0) report.per_class_accuracy(c) = static_cast<double>(report.confusion(c, c)) / row_totals(c);
  return report;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

std::vector<OfflineOutcome> evaluate_offline(const Model& model, std::span<const ActionSequence> tests, int workers) {
  std::vector<OfflineOutcome> out(tests.size());
  for (std::size_t i = 0; i < tests.size(); ++i) out[i].truth = truth_index(model, tests[i]);
  parallel_for(tests.size(), workers, [&](std::size_t i) {
    out[i].id = tests[i].id;
    out[i].result = classify_offline(tests[i], model);
  });
  return out;
}

StreamOutcome replay_stream(const Model& model, const ActionSequence& seq, std::span<const double> fractions) {
  StreamOutcome outcome;
  outcome.id = seq.id;
  if (seq.label) outcome.truth = model.labels().index_of(*seq.label);
  OnlineClassifier online(model);
  const auto F = seq.frame_count();
  Eigen::Index fed = 0;
  for (double q : fractions) {
    const auto want = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::ceil(q * static_cast<double>(F) - 1e-9)), 1, F);
    while (fed < want) {
      online.push(fed, seq.frames[static_cast<std::size_t>(fed)]);
      ++fed;
    }
    if (fed == F) online.finish();
    const auto pred = online.prediction();
    outcome.predictions.push_back(pred ? pred->label : -1);
  }
  while (fed < F) {
    online.push(fed, seq.frames[static_cast<std::size_t>(fed)]);
    ++fed;
  }
  online.finish();
  outcome.trace = online.trace();
  return outcome;
}

std::vector<StreamOutcome> evaluate_stream(const Model& model, std::span<const ActionSequence> tests,
                                           std::span<const double> fractions, int workers) {
  std::vector<StreamOutcome> out(tests.size());
  for (const auto& t : tests) truth_index(model, t);
  parallel_for(tests.size(), workers, [&](std::size_t i) { out[i] = replay_stream(model, tests[i], fractions); });
  return out;
}

std::vector<double> parse_fractions(const std::string& text) {
  std::vector<double> out;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || !(v > 0 && v <= 1)) throw std::invalid_argument("bad frame fraction '" + s + "'");
    return v;
  };
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const double lo = number(text.substr(0, dots));
    const double hi = number(text.substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("fraction range is reversed");
    for (int k = static_cast<int>(std::lround(lo * 10)); k <= static_cast<int>(std::lround(hi * 10)); ++k)
      out.push_back(k / 10.0);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(number(item));
  }
  if (out.empty()) throw std::invalid_argument("no frame fractions given");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void write_confusion_csv(std::ostream& out, const EvalReport& report) {
  out << "truth";
  for (const auto& c : report.classes) out << ',' << c;
  out << '\n';
  for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
    out << report.classes[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < report.confusion.cols(); ++c) out << ',' << report.confusion(r, c);
    out << '\n';
  }
}

void write_summary(std::ostream& out, const EvalReport& report) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "accuracy %.4f (%d / %d)\n", report.accuracy, report.confusion.trace(),
                report.confusion.rowwise().sum().sum() + 0);
  out << buf;
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    std::snprintf(buf, sizeof(buf), "  %-24s %.4f\n", report.classes[c].c_str(),
                  report.per_class_accuracy(static_cast<Eigen::Index>(c)));
    out << buf;
  }
}

void write_curve_csv(std::ostream& out, const EvalReport& report) {
  out << "fraction,accuracy\n";
  char buf[64];
  for (std::size_t i = 0; i < report.fractions.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.2f,%.6f\n", report.fractions[i], report.curve[i]);
    out << buf;
  }
}

}  // namespace slidedict
