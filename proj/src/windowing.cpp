#include "slidedict/windowing.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace slidedict {

void WindowSpec::validate() const {
  if (count < 1) throw std::invalid_argument("windows.W must be >= 1");
  if (half_width < 0) throw std::invalid_argument("windows.N must be >= 0");
  if (online_lengths.empty()) throw std::invalid_argument("windows.online_lengths must be non-empty");
  for (std::size_t i = 0; i < online_lengths.size(); ++i) {
    if (online_lengths[i] < 2) throw std::invalid_argument("online window lengths must be >= 2");
    if (i > 0 && online_lengths[i] <= online_lengths[i - 1])
      throw std::invalid_argument("online window lengths must be strictly increasing");
  }
}

std::vector<Window> segment(Eigen::Index frame_count, int window_count) {
  if (frame_count < 1) throw std::invalid_argument("segment: frame count must be >= 1");
  if (window_count < 1) throw std::invalid_argument("segment: window count must be >= 1");
  const Eigen::Index W = window_count;
  const Eigen::Index half = (frame_count + W) / (W + 1);  // ceil(F / (W+1))
  // fewer frames than windows: every window spans the whole sequence
  const Eigen::Index len =
      frame_count < W ? frame_count : std::min(frame_count, std::max<Eigen::Index>(1, 2 * half));
  const Eigen::Index slack = frame_count - len;

  std::vector<Window> windows;
  windows.reserve(static_cast<std::size_t>(W));
  for (Eigen::Index w = 1; w <= W; ++w) {
    Eigen::Index start = 0;
    // round half up of slack*(w-1)/(W-1), in integers
    if (W > 1) start = (2 * slack * (w - 1) + (W - 1)) / (2 * (W - 1));
    windows.push_back({static_cast<int>(w), start, start + len});
  }
  return windows;
}

WindowRange sliding_range(int w, int half_width, int window_count) {
  return {std::max(1, w - half_width), std::min(window_count, w + half_width)};
}

std::vector<Window> centered_windows(Eigen::Index t, Eigen::Index available, const WindowSpec& spec) {
  std::vector<Window> out;
  for (int len : spec.online_lengths) {
    const Eigen::Index start = t - len / 2;
    const Eigen::Index end = t + (len + 1) / 2;
    if (start >= 0 && end <= available)
      out.push_back({static_cast<int>(out.size()) + 1, start, end});
  }
  if (out.empty()) out.push_back({1, 0, available});
  return out;
}

int progress_to_window(Eigen::Index t, Eigen::Index reference_length, int window_count) {
  // ceil((t+1) * W / F_ref)
  const Eigen::Index num = (t + 1) * window_count;
  const Eigen::Index w = (num + reference_length - 1) / reference_length;
  return static_cast<int>(std::clamp<Eigen::Index>(w, 1, window_count));
}

}  // namespace slidedict
