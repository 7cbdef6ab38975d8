#include "slidedict/skeleton.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace slidedict {

namespace {

double parse_real(std::string_view token, std::size_t line_no) {
  // from_chars rejects a leading '+', which some exporters emit
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": not a number: '" +
                     std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) + ": non-finite coordinate");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_on(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    out.push_back(trim(line.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto start = line.find_first_not_of(" \t\r\n", pos);
    if (start == std::string_view::npos) break;
    auto end = line.find_first_of(" \t\r\n", start);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(line.substr(start, end - start));
    pos = end;
  }
  return out;
}

// Fills one frame from 3*J coordinates in joint-major order.
JointFrame frame_from_tokens(std::span<const std::string_view> coords, std::size_t line_no) {
  const auto joints = static_cast<Eigen::Index>(coords.size() / 3);
  JointFrame frame(joints, 3);
  for (Eigen::Index j = 0; j < joints; ++j)
    for (Eigen::Index a = 0; a < 3; ++a)
      frame(j, a) = parse_real(coords[static_cast<std::size_t>(3 * j + a)], line_no);
  return frame;
}

int coord_joint_count(std::size_t n_coords, std::size_t line_no) {
  if (n_coords == 0 || n_coords % 3 != 0) {
    throw ParseError("line " + std::to_string(line_no) + ": expected 3*J coordinates, got " +
                     std::to_string(n_coords));
  }
  const auto joints = static_cast<int>(n_coords / 3);
  if (joints < 2) throw ParseError("line " + std::to_string(line_no) + ": need at least 2 joints");
  return joints;
}

}  // namespace

int LabelSet::index_of(const std::string& name) const {
  const auto it = std::find(classes.begin(), classes.end(), name);
  return it == classes.end() ? -1 : static_cast<int>(it - classes.begin());
}

LabelSet LabelSet::from_sequences(std::span<const ActionSequence> seqs) {
  std::set<std::string> names;
  for (const auto& s : seqs) {
    if (!s.label) throw std::invalid_argument("sequence '" + s.id + "' has no label");
    names.insert(*s.label);
  }
  LabelSet set;
  set.classes.assign(names.begin(), names.end());
  set.counts.assign(set.classes.size(), 0);
  for (const auto& s : seqs) ++set.counts[static_cast<std::size_t>(set.index_of(*s.label))];
  return set;
}

SequenceFormat parse_sequence_format(const std::string& name) {
  if (name == "canonical-csv") return SequenceFormat::CanonicalCsv;
  if (name == "utk-text") return SequenceFormat::UtkText;
  throw std::invalid_argument("unknown sequence format: " + name);
}

std::string to_string(SequenceFormat format) {
  return format == SequenceFormat::CanonicalCsv ? "canonical-csv" : "utk-text";
}

ActionSequence read_canonical_csv(std::istream& in, std::optional<int> joint_count) {
  std::string line;
  std::size_t line_no = 0;
  int joints = 0;
  bool have_header = false;
  ActionSequence seq;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_on(line, ',');
    if (!have_header) {
      if (fields.empty() || fields.front() != "frame")
        throw ParseError("line " + std::to_string(line_no) + ": missing 'frame,...' header");
      joints = coord_joint_count(fields.size() - 1, line_no);
      for (int j = 0; j < joints; ++j) {
        const std::string idx = std::to_string(j);
        if (fields[1 + 3 * j] != "x" + idx || fields[2 + 3 * j] != "y" + idx ||
            fields[3 + 3 * j] != "z" + idx)
          throw ParseError("line " + std::to_string(line_no) + ": bad column name for joint " + idx);
      }
      if (joint_count && *joint_count != joints)
        throw ParseError("header declares " + std::to_string(joints) + " joints, expected " +
                         std::to_string(*joint_count));
      have_header = true;
      continue;
    }
    if (fields.size() != static_cast<std::size_t>(1 + 3 * joints)) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(1 + 3 * joints) + " columns, got " +
                       std::to_string(fields.size()));
    }
    seq.frames.push_back(frame_from_tokens(std::span(fields).subspan(1), line_no));
  }
  if (seq.frames.empty()) throw ParseError("sequence has no frames");
  return seq;
}

ActionSequence read_utk_text(std::istream& in, std::optional<int> joint_count) {
  std::string line;
  std::size_t line_no = 0;
  ActionSequence seq;
  std::optional<int> joints = joint_count;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_whitespace(line);
    if (tokens.empty()) continue;
    const int row_joints = coord_joint_count(tokens.size() - 1, line_no);
    if (!joints) joints = row_joints;
    if (row_joints != *joints) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(3 * *joints) + " coordinates, got " +
                       std::to_string(tokens.size() - 1));
    }
    parse_real(tokens.front(), line_no);  // frame id must be numeric
    seq.frames.push_back(frame_from_tokens(std::span(tokens).subspan(1), line_no));
  }
  if (seq.frames.empty()) throw ParseError("sequence has no frames");
  return seq;
}

ActionSequence load_sequence(const std::filesystem::path& path, SequenceFormat format,
                             std::optional<int> joint_count) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    auto seq = format == SequenceFormat::CanonicalCsv ? read_canonical_csv(in, joint_count)
                                                      : read_utk_text(in, joint_count);
    seq.id = path.stem().string();
    return seq;
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_canonical_csv(std::ostream& out, const ActionSequence& seq) {
  const auto joints = seq.joint_count();
  out << "frame";
  for (Eigen::Index j = 0; j < joints; ++j) out << ",x" << j << ",y" << j << ",z" << j;
  out << '\n';
  char buf[64];
  for (std::size_t f = 0; f < seq.frames.size(); ++f) {
    out << f;
    const auto& frame = seq.frames[f];
    for (Eigen::Index j = 0; j < joints; ++j) {
      for (Eigen::Index a = 0; a < 3; ++a) {
        auto res = std::to_chars(buf, buf + sizeof(buf), frame(j, a), std::chars_format::general, 9);
        out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
      }
    }
    out << '\n';
  }
}

void write_canonical_csv(const std::filesystem::path& path, const ActionSequence& seq) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_canonical_csv(out, seq);
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  DatasetManifest manifest;
  manifest.base_dir = path.parent_path();
  try {
    manifest.joint_count = doc.at("joint_count").get<int>();
    manifest.sample_rate = doc.value("sample_rate", 0.0);
    manifest.format = parse_sequence_format(doc.value("format", std::string("canonical-csv")));
    for (const auto& e : doc.at("entries")) {
      ManifestEntry entry;
      entry.path = e.at("path").get<std::string>();
      entry.label = e.at("label").get<std::string>();
      entry.subject = e.at("subject").get<int>();
      entry.trial = e.value("trial", 0);
      manifest.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (manifest.joint_count < 2) throw ParseError(path.string() + ": joint_count must be >= 2");
  return manifest;
}

void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  nlohmann::ordered_json doc;
  doc["joint_count"] = manifest.joint_count;
  doc["sample_rate"] = manifest.sample_rate;
  doc["format"] = to_string(manifest.format);
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : manifest.entries) {
    doc["entries"].push_back(
        {{"path", e.path.generic_string()}, {"label", e.label}, {"subject", e.subject}, {"trial", e.trial}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::vector<ActionSequence> load_dataset(const DatasetManifest& manifest) {
  std::vector<ActionSequence> out;
  out.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) {
    const auto path = e.path.is_absolute() ? e.path : manifest.base_dir / e.path;
    auto seq = load_sequence(path, manifest.format, manifest.joint_count);
    seq.label = e.label;
    seq.subject = e.subject;
    seq.trial = e.trial;
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<std::string> validate_sequence(const ActionSequence& seq) {
  std::vector<std::string> violations;
  if (seq.frames.empty()) {
    violations.push_back("sequence has no frames");
    return violations;
  }
  const auto joints = seq.frames.front().rows();
  if (joints < 2) violations.push_back("frame 0 has " + std::to_string(joints) + " joints (need >= 2)");
  bool reported_mixed = false;
  for (std::size_t f = 0; f < seq.frames.size(); ++f) {
    const auto& frame = seq.frames[f];
    if (frame.rows() != joints && !reported_mixed) {
      violations.push_back("frame " + std::to_string(f) + " has " + std::to_string(frame.rows()) +
                           " joints, frame 0 has " + std::to_string(joints));
      reported_mixed = true;
    }
    if (!frame.allFinite()) violations.push_back("frame " + std::to_string(f) + " has non-finite coordinates");
  }
  return violations;
}

SplitRule parse_split_rule(const std::string& name) {
  if (name == "odd-train") return SplitRule::OddTrain;
  if (name == "listed-subjects") return SplitRule::ListedSubjects;
  throw std::invalid_argument("unknown split rule: " + name);
}

Split split_cross_subject(std::span<const ActionSequence> sequences, SplitRule rule,
                          std::span<const int> subjects) {
  std::set<int> present;
  for (const auto& s : sequences) present.insert(s.subject);
  std::set<int> train_subjects;
  if (rule == SplitRule::ListedSubjects) {
    for (int s : subjects) {
      if (!present.count(s)) throw std::invalid_argument("unknown subject in split list: " + std::to_string(s));
      train_subjects.insert(s);
    }
  } else {
    for (int s : present)
      if (s % 2 != 0) train_subjects.insert(s);
  }
  Split split;
  for (const auto& s : sequences) (train_subjects.count(s.subject) ? split.train : split.test).push_back(s);
  if (split.train.empty()) throw std::invalid_argument("cross-subject split leaves the training set empty");
  return split;
}

Split split_cross_subject(const DatasetManifest& manifest, SplitRule rule, std::span<const int> subjects) {
  const auto sequences = load_dataset(manifest);
  return split_cross_subject(sequences, rule, subjects);
}

}  // namespace slidedict
