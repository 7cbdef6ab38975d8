#include "slidedict/do3dj.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace slidedict {

Baseline baseline(const JointFrame& test_first, const JointFrame& train_first) {
  if (test_first.rows() != train_first.rows()) throw std::invalid_argument("baseline: joint count mismatch");
  return {test_first - train_first};
}

Baseline baseline(const ActionSequence& test, const ActionSequence& train) {
  if (test.frames.empty() || train.frames.empty()) throw std::invalid_argument("baseline: empty sequence");
  return baseline(test.frames.front(), train.frames.front());
}

Window training_frame_range(Eigen::Index frame_count, int w, const WindowSpec& spec) {
  const auto windows = segment(frame_count, spec.count);
  const auto range = sliding_range(w, spec.half_width, spec.count);
  // windows overlap and cover the sequence, so the union is contiguous
  return {w, windows[static_cast<std::size_t>(range.first - 1)].start,
          windows[static_cast<std::size_t>(range.last - 1)].end};
}

double mean_of_smallest(std::vector<double> pool, int pool_size) {
  if (pool.empty()) throw std::invalid_argument("difference score over an empty pool");
  if (pool_size < 1) throw std::invalid_argument("pool size L must be >= 1");
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(pool_size), pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end());
  return std::accumulate(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take), 0.0) /
         static_cast<double>(take);
}

double class_diff_score(std::span<const JointFrame> test_window, std::span<const ActionSequence> train_class,
                        int w, const WindowSpec& spec, std::span<const Baseline> baselines, int pool_size) {
  if (train_class.empty()) throw std::invalid_argument("class_diff_score: no training sequences");
  if (baselines.size() != train_class.size())
    throw std::invalid_argument("class_diff_score: one baseline per training sequence required");
  if (pool_size < 1) throw std::invalid_argument("pool size L must be >= 1");

  // Running set of the L smallest distances; the mean does not depend on how
  // equal values are ordered.
  const auto keep = static_cast<std::size_t>(pool_size);
  std::vector<double> best;
  best.reserve(keep + 1);
  std::size_t seen = 0;
  JointFrame shifted;
  for (std::size_t k = 0; k < train_class.size(); ++k) {
    const auto& train = train_class[k];
    const auto range = training_frame_range(train.frame_count(), w, spec);
    for (const auto& t : test_window) {
      if (t.rows() != baselines[k].beta.rows()) throw std::invalid_argument("class_diff_score: joint count mismatch");
      shifted = t - baselines[k].beta;
      for (Eigen::Index n = range.start; n < range.end; ++n) {
        const double d = (shifted - train.frames[static_cast<std::size_t>(n)]).norm();
        ++seen;
        if (best.size() < keep) {
          best.push_back(d);
          std::push_heap(best.begin(), best.end());
        } else if (d < best.front()) {
          std::pop_heap(best.begin(), best.end());
          best.back() = d;
          std::push_heap(best.begin(), best.end());
        }
      }
    }
  }
  if (seen == 0) throw std::invalid_argument("class_diff_score: empty distance pool");
  return mean_of_smallest(std::move(best), pool_size);
}

}  // namespace slidedict
