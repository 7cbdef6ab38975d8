#include "slidedict/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace slidedict {

namespace {

std::string class_name(int c) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "action_%02d", c);
  return buf;
}

std::string sequence_id(int c, int subject, int trial) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "c%02d_s%02d_t%02d", c, subject, trial);
  return buf;
}

}  // namespace

void SynthSpec::validate() const {
  if (classes < 1) throw std::invalid_argument("synth: classes must be >= 1");
  if (joints < 2) throw std::invalid_argument("synth: joints must be >= 2");
  if (frames_min < 1 || frames_max < frames_min) throw std::invalid_argument("synth: bad frame range");
  if (!(noise_sigma >= 0) || !(start_offset >= 0) || !(body_jitter >= 0))
    throw std::invalid_argument("synth: noise, offset and jitter must be >= 0");
  if (!motions.empty()) {
    if (static_cast<int>(motions.size()) != classes) throw std::invalid_argument("synth: one motion per class required");
    for (std::size_t i = 0; i < motions.size(); ++i) {
      const auto& m = motions[i];
      if (m.amplitude.rows() != joints || m.amplitude.cols() != 3 || m.phase.size() != joints)
        throw std::invalid_argument("synth: motion shape does not match joint count");
      for (std::size_t k = 0; k < i; ++k)
        if (motions[k].frequency == m.frequency && motions[k].amplitude == m.amplitude)
          throw std::invalid_argument("synth: classes " + std::to_string(k) + " and " + std::to_string(i) +
                                      " share a (frequency, amplitude) signature");
    }
  }
}

std::vector<ClassMotion> class_motions(const SynthSpec& spec) {
  spec.validate();
  if (!spec.motions.empty()) return spec.motions;
  std::mt19937_64 rng(spec.seed ^ 0x5eed'c1a5'5e5full);
  std::uniform_real_distribution<double> amp(0.05, 0.25);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  std::bernoulli_distribution active(0.4);
  std::vector<ClassMotion> out;
  for (int c = 0; c < spec.classes; ++c) {
    ClassMotion m;
    m.frequency = 1.0 + 0.5 * c;
    m.amplitude = Eigen::MatrixXd::Zero(spec.joints, 3);
    m.phase.resize(spec.joints);
    int n_active = 0;
    for (int j = 0; j < spec.joints; ++j) {
      // at least min(3, J) joints move
      const bool moves = active(rng) || spec.joints - j <= std::min(3, spec.joints) - n_active;
      for (int a = 0; a < 3; ++a) {
        const double v = amp(rng);
        if (moves) m.amplitude(j, a) = v;
      }
      n_active += moves ? 1 : 0;
      m.phase(j) = phase(rng);
    }
    out.push_back(std::move(m));
  }
  return out;
}

SynthDataset generate(const SynthSpec& spec, int n_per_class, int subjects) {
  if (n_per_class < 1 || subjects < 1) throw std::invalid_argument("synth: counts must be >= 1");
  const auto motions = class_motions(spec);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> length(spec.frames_min, spec.frames_max);

  // shared rest pose and per-subject body offsets
  Eigen::MatrixXd rest(spec.joints, 3);
  for (int j = 0; j < spec.joints; ++j) {
    rest(j, 0) = 0.3 * unit(rng);
    rest(j, 1) = 0.8 + 0.8 * unit(rng);
    rest(j, 2) = 0.1 * unit(rng);
  }
  std::vector<Eigen::MatrixXd> bodies;
  for (int s = 0; s < subjects; ++s) {
    Eigen::MatrixXd body(spec.joints, 3);
    for (Eigen::Index k = 0; k < body.size(); ++k) body.data()[k] = spec.body_jitter * gauss(rng);
    bodies.push_back(rest + body);
  }

  SynthDataset data;
  data.manifest.joint_count = spec.joints;
  data.manifest.sample_rate = 30.0;
  data.manifest.format = SequenceFormat::CanonicalCsv;
  for (int c = 0; c < spec.classes; ++c) {
    const auto& motion = motions[static_cast<std::size_t>(c)];
    for (int k = 0; k < n_per_class; ++k) {
      ActionSequence seq;
      seq.label = class_name(c);
      seq.subject = k % subjects + 1;
      seq.trial = k / subjects + 1;
      seq.id = sequence_id(c, seq.subject, seq.trial);
      const int F = length(rng);
      Eigen::RowVector3d offset;
      for (int a = 0; a < 3; ++a) offset(a) = spec.start_offset * unit(rng);
      const auto& body = bodies[static_cast<std::size_t>(seq.subject - 1)];
      seq.frames.reserve(static_cast<std::size_t>(F));
      for (int n = 0; n < F; ++n) {
        const double s = F > 1 ? static_cast<double>(n) / (F - 1) : 0.0;
        JointFrame frame = body.rowwise() + offset;
        for (int j = 0; j < spec.joints; ++j)
          for (int a = 0; a < 3; ++a)
            frame(j, a) += motion.amplitude(j, a) *
                           std::sin(2 * std::numbers::pi * motion.frequency * s + motion.phase(j) + a * std::numbers::pi / 3);
        if (spec.noise_sigma > 0)
          for (Eigen::Index e = 0; e < frame.size(); ++e) frame.data()[e] += spec.noise_sigma * gauss(rng);
        seq.frames.push_back(std::move(frame));
      }
      data.manifest.entries.push_back({seq.id + ".csv", *seq.label, seq.subject, seq.trial});
      data.sequences.push_back(std::move(seq));
    }
  }
  return data;
}

void write_dataset(const SynthDataset& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < data.sequences.size(); ++i)
    write_canonical_csv(dir / data.manifest.entries[i].path, data.sequences[i]);
  save_manifest(dir / "manifest.json", data.manifest);
}

}  // namespace slidedict
