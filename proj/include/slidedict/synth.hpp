#pragma once

#include "slidedict/skeleton.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace slidedict {

/// Sinusoidal motion signature of one synthetic class. Joint j, axis a moves as
/// amplitude(j, a) * sin(2*pi*frequency*s + phase(j) + a*pi/3), s in [0, 1].
struct ClassMotion {
  double frequency = 1.0;     // cycles per sequence
  Eigen::MatrixXd amplitude;  // J x 3
  Eigen::VectorXd phase;      // J
};

struct SynthSpec {
  int classes = 3;
  int joints = 20;
  int frames_min = 40;
  int frames_max = 80;
  double noise_sigma = 0.0;   // per coordinate, per frame
  double start_offset = 0.5;  // half-width of the random global translation
  double body_jitter = 0.02;  // per-subject joint offsets
  std::uint64_t seed = 1;
  /// Per-class signatures; derived from the seed when empty.
  std::vector<ClassMotion> motions;

  void validate() const;
};

struct SynthDataset {
  DatasetManifest manifest;  // paths are the CSV names write_dataset produces
  std::vector<ActionSequence> sequences;
};

/// Per-class signatures: explicit ones when given, otherwise seed-derived.
std::vector<ClassMotion> class_motions(const SynthSpec& spec);

/// n_per_class sequences per class; subjects assigned round-robin (1-based).
SynthDataset generate(const SynthSpec& spec, int n_per_class, int subjects);

/// Writes one canonical CSV per sequence plus manifest.json into `dir`.
void write_dataset(const SynthDataset& data, const std::filesystem::path& dir);

}  // namespace slidedict
