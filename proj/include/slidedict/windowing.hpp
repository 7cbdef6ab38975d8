#pragma once

#include <Eigen/Core>

#include <vector>

namespace slidedict {

/// Window count W, sliding half-width N, and the candidate lengths used for
/// frame-centered windows when streaming.
struct WindowSpec {
  int count = 8;
  int half_width = 2;
  std::vector<int> online_lengths{8, 16, 24, 32};

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

/// Half-open frame range [start, end). `index` is 1-based.
struct Window {
  int index = 1;
  Eigen::Index start = 0;
  Eigen::Index end = 0;

  Eigen::Index size() const { return end - start; }
  bool operator==(const Window&) const = default;
};

/// Inclusive range of 1-based window indices.
struct WindowRange {
  int first = 1;
  int last = 1;

  int size() const { return last - first + 1; }
  bool contains(int w) const { return w >= first && w <= last; }
  bool operator==(const WindowRange&) const = default;
};

/// Splits F frames into exactly W overlapping windows of equal length
/// min(F, max(1, 2*ceil(F/(W+1)))) with evenly spaced (rounded) starts.
std::vector<Window> segment(Eigen::Index frame_count, int window_count);

/// Windows w-N .. w+N clamped to [1, W].
WindowRange sliding_range(int w, int half_width, int window_count);

/// Windows of each online length having frame t as their middle frame, kept
/// only when inside [0, available). Falls back to [0, available).
std::vector<Window> centered_windows(Eigen::Index t, Eigen::Index available, const WindowSpec& spec);

/// Dictionary window index for stream frame t given a reference length.
int progress_to_window(Eigen::Index t, Eigen::Index reference_length, int window_count);

}  // namespace slidedict
