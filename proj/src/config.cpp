#include "slidedict/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace slidedict {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "dataset.manifest", "split.rule",       "split.subjects",    "windows.W",         "windows.N",
      "windows.online_lengths", "sparse.lambda", "sparse.tol",     "sparse.max_iter",   "sparse.eps",
      "do3dj.L",          "fusion.mu1",       "output.dir",        "seed",              "workers",
      "synth.classes",    "synth.joints",     "synth.frames_min",  "synth.frames_max",  "synth.noise_sigma",
      "synth.start_offset", "synth.body_jitter", "synth.seed",     "synth.n_per_class", "synth.subjects"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("config key '" + key + "': bad value '" + text + "'");
  return value;
}

}  // namespace

bool Config::is_known_key(const std::string& key) { return known_keys().count(key) != 0; }

Config Config::parse(std::istream& in, const std::string& source) {
  Config config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  auto config = parse(in, path.string());
  config.base_dir = path.parent_path();
  return config;
}

void Config::set(const std::string& key, const std::string& value) {
  if (!is_known_key(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  values_[key] = value;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<int>(key, it->second);
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<double>(key, it->second);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty entry in integer list '" + text + "'");
    out.push_back(parse_number<int>("list", item));
  }
  return out;
}

std::vector<int> Config::get_int_list(const std::string& key, const std::vector<int>& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_int_list(it->second);
}

ExperimentConfig ExperimentConfig::from(const Config& config) {
  ExperimentConfig ex;
  auto resolve = [&](const std::filesystem::path& p) { return p.is_absolute() || p.empty() ? p : config.base_dir / p; };
  ex.manifest = resolve(config.get_string("dataset.manifest", ""));
  ex.split_rule = parse_split_rule(config.get_string("split.rule", "odd-train"));
  ex.split_subjects = config.get_int_list("split.subjects", {});
  if (ex.split_rule == SplitRule::ListedSubjects && ex.split_subjects.empty())
    throw std::invalid_argument("split.rule = listed-subjects needs split.subjects");

  auto& p = ex.params;
  p.windows.count = config.get_int("windows.W", p.windows.count);
  p.windows.half_width = config.get_int("windows.N", p.windows.half_width);
  p.windows.online_lengths = config.get_int_list("windows.online_lengths", p.windows.online_lengths);
  p.lasso.lambda = config.get_double("sparse.lambda", p.lasso.lambda);
  p.lasso.tol = config.get_double("sparse.tol", p.lasso.tol);
  p.lasso.max_iter = config.get_int("sparse.max_iter", p.lasso.max_iter);
  p.eps = config.get_double("sparse.eps", p.eps);
  p.pool_size = config.get_int("do3dj.L", p.pool_size);
  p.fusion = FusionWeights::from_dict_weight(config.get_double("fusion.mu1", 0.5));
  p.validate();

  ex.output_dir = resolve(config.get_string("output.dir", "out"));
  ex.seed = static_cast<std::uint64_t>(config.get_int("seed", 0));
  ex.workers = config.get_int("workers", 1);
  if (ex.workers < 1) throw std::invalid_argument("workers must be >= 1");
  return ex;
}

SynthRequest SynthRequest::from(const Config& config) {
  SynthRequest req;
  auto& s = req.spec;
  s.classes = config.get_int("synth.classes", s.classes);
  s.joints = config.get_int("synth.joints", s.joints);
  s.frames_min = config.get_int("synth.frames_min", s.frames_min);
  s.frames_max = config.get_int("synth.frames_max", s.frames_max);
  s.noise_sigma = config.get_double("synth.noise_sigma", s.noise_sigma);
  s.start_offset = config.get_double("synth.start_offset", s.start_offset);
  s.body_jitter = config.get_double("synth.body_jitter", s.body_jitter);
  s.seed = static_cast<std::uint64_t>(config.get_int("synth.seed", static_cast<int>(s.seed)));
  req.n_per_class = config.get_int("synth.n_per_class", req.n_per_class);
  req.subjects = config.get_int("synth.subjects", req.subjects);
  s.validate();
  if (req.n_per_class < 1 || req.subjects < 1) throw std::invalid_argument("synth counts must be >= 1");
  return req;
}

int resolve_workers(int fallback) {
  if (const char* env = std::getenv("SLIDEDICT_WORKERS"); env && *env) {
    int n = 0;
    const std::string text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc() || ptr != text.data() + text.size() || n < 1)
      throw std::invalid_argument("SLIDEDICT_WORKERS must be a positive integer");
    return n;
  }
  return std::max(1, fallback);
}

}  // namespace slidedict
