#pragma once

#include "slidedict/model.hpp"
#include "slidedict/skeleton.hpp"
#include "slidedict/synth.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace slidedict {

/// Flat `key = value` settings; `#` starts a comment. Unknown keys are rejected.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  int get_int(const std::string& key, int fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;

  /// Directory relative paths in this config resolve against.
  std::filesystem::path base_dir;

  static bool is_known_key(const std::string& key);

 private:
  std::map<std::string, std::string> values_;
};

std::vector<int> parse_int_list(const std::string& text);

struct ExperimentConfig {
  std::filesystem::path manifest;
  SplitRule split_rule = SplitRule::OddTrain;
  std::vector<int> split_subjects;
  ModelParams params;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  int workers = 1;

  static ExperimentConfig from(const Config& config);
};

struct SynthRequest {
  SynthSpec spec;
  int n_per_class = 10;
  int subjects = 10;

  static SynthRequest from(const Config& config);
};

/// Worker count: SLIDEDICT_WORKERS when set, else `fallback`; at least 1.
int resolve_workers(int fallback);

}  // namespace slidedict
