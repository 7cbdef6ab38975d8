#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace slidedict {

/// One frame of skeletal joints: row j holds the (x, y, z) position of joint j.
template <typename Scalar>
using JointFrameT = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;
using JointFrame = JointFrameT<double>;

/// Raised for malformed dataset files and manifests.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An ordered run of frames for one performed action.
struct ActionSequence {
  std::vector<JointFrame> frames;
  std::optional<std::string> label;  // absent for unlabeled streams
  int subject = 0;
  int trial = 0;
  std::string id;

  Eigen::Index frame_count() const { return static_cast<Eigen::Index>(frames.size()); }
  Eigen::Index joint_count() const { return frames.empty() ? 0 : frames.front().rows(); }
};

/// Ordered class names (sorted, unique) with training counts K_c.
struct LabelSet {
  std::vector<std::string> classes;
  std::vector<int> counts;

  int size() const { return static_cast<int>(classes.size()); }
  /// Index of `name`, or -1.
  int index_of(const std::string& name) const;

  static LabelSet from_sequences(std::span<const ActionSequence> seqs);
};

enum class SequenceFormat { CanonicalCsv, UtkText };

SequenceFormat parse_sequence_format(const std::string& name);
std::string to_string(SequenceFormat format);

struct ManifestEntry {
  std::filesystem::path path;  // relative entries resolve against the manifest directory
  std::string label;
  int subject = 0;
  int trial = 0;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  int joint_count = 0;
  double sample_rate = 0.0;
  SequenceFormat format = SequenceFormat::CanonicalCsv;
  std::filesystem::path base_dir;
};

/// Reads one sequence. `joint_count`, when given, is enforced on every row.
ActionSequence load_sequence(const std::filesystem::path& path, SequenceFormat format,
                             std::optional<int> joint_count = std::nullopt);
ActionSequence read_canonical_csv(std::istream& in, std::optional<int> joint_count = std::nullopt);
ActionSequence read_utk_text(std::istream& in, std::optional<int> joint_count = std::nullopt);

/// Canonical CSV: header `frame,x0,y0,z0,...`, one row per frame, 9 significant digits.
void write_canonical_csv(std::ostream& out, const ActionSequence& seq);
void write_canonical_csv(const std::filesystem::path& path, const ActionSequence& seq);

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Loads every entry, attaching label/subject/trial and checking joint_count.
std::vector<ActionSequence> load_dataset(const DatasetManifest& manifest);

/// Human-readable violations of the frame invariants; empty when the sequence is valid.
std::vector<std::string> validate_sequence(const ActionSequence& seq);

enum class SplitRule { OddTrain, ListedSubjects };

SplitRule parse_split_rule(const std::string& name);

struct Split {
  std::vector<ActionSequence> train;
  std::vector<ActionSequence> test;
};

/// Cross-subject partition. Throws on unknown listed subjects or an empty training side.
Split split_cross_subject(std::span<const ActionSequence> sequences, SplitRule rule,
                          std::span<const int> subjects = {});
Split split_cross_subject(const DatasetManifest& manifest, SplitRule rule,
                          std::span<const int> subjects = {});

}  // namespace slidedict
