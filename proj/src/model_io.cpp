#include "slidedict/model_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace slidedict {

namespace {

constexpr char kMagic[4] = {'S', 'D', 'C', 'T'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void uint(T v) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out_.write(reinterpret_cast<const char*>(buf), sizeof(T));
  }
  void u8(std::uint8_t v) { uint(v); }
  void u32(std::uint32_t v) { uint(v); }
  void i32(std::int32_t v) { uint(static_cast<std::uint32_t>(v)); }
  void u64(std::uint64_t v) { uint(v); }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename T>
  T uint() {
    unsigned char buf[sizeof(T)];
    if (!in_.read(reinterpret_cast<char*>(buf), sizeof(T))) throw std::runtime_error("model file truncated");
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
    return v;
  }
  std::uint8_t u8() { return uint<std::uint8_t>(); }
  std::uint32_t u32() { return uint<std::uint32_t>(); }
  std::int32_t i32() { return static_cast<std::int32_t>(uint<std::uint32_t>()); }
  std::uint64_t u64() { return uint<std::uint64_t>(); }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
  std::string str() {
    const auto n = u32();
    if (n > (1u << 20)) throw std::runtime_error("model file: implausible string length");
    std::string s(n, '\0');
    if (!in_.read(s.data(), n)) throw std::runtime_error("model file truncated");
    return s;
  }

 private:
  std::istream& in_;
};

}  // namespace

void write_model(std::ostream& out, const Model& model) {
  Writer w(out);
  const auto& dict = model.dictionary();
  const auto& p = model.params();
  w.u8(kModelFormatVersion);
  out.write(kMagic, sizeof(kMagic));
  w.u64(static_cast<std::uint64_t>(dict.dimension()));
  w.u64(static_cast<std::uint64_t>(dict.size()));
  w.u32(static_cast<std::uint32_t>(dict.window_count));
  w.u32(static_cast<std::uint32_t>(dict.class_count()));
  for (const auto& name : dict.labels.classes) w.str(name);
  w.f64(p.lasso.lambda);
  w.u32(static_cast<std::uint32_t>(p.windows.half_width));
  w.u32(static_cast<std::uint32_t>(p.windows.online_lengths.size()));
  for (int len : p.windows.online_lengths) w.u32(static_cast<std::uint32_t>(len));
  w.f64(p.lasso.tol);
  w.u32(static_cast<std::uint32_t>(p.lasso.max_iter));
  w.f64(p.lasso.kkt_tol);
  w.f64(p.eps);
  w.u32(static_cast<std::uint32_t>(p.pool_size));
  w.f64(p.fusion.dict());
  w.f64(p.fusion.diff());
  w.u64(static_cast<std::uint64_t>(model.reference_length()));

  for (Eigen::Index k = 0; k < dict.atoms.size(); ++k) w.f64(dict.atoms.data()[k]);
  for (const auto& m : dict.meta) {
    w.u32(static_cast<std::uint32_t>(m.label));
    w.u32(static_cast<std::uint32_t>(m.window));
    w.u32(static_cast<std::uint32_t>(m.example));
  }

  const auto training = model.training();
  w.u32(static_cast<std::uint32_t>(model.joint_count()));
  w.u64(training.size());
  for (const auto& s : training) {
    w.u32(static_cast<std::uint32_t>(dict.labels.index_of(*s.label)));
    w.i32(s.subject);
    w.i32(s.trial);
    w.str(s.id);
    w.u64(static_cast<std::uint64_t>(s.frame_count()));
    for (const auto& f : s.frames)
      for (Eigen::Index j = 0; j < f.rows(); ++j)
        for (Eigen::Index a = 0; a < 3; ++a) w.f64(f(j, a));
  }
  if (!out) throw std::runtime_error("failed writing model");
}

Model read_model(std::istream& in) {
  Reader r(in);
  const auto version = r.u8();
  if (version != kModelFormatVersion)
    throw std::runtime_error("unsupported model format version " + std::to_string(version));
  char magic[4];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not a model file (bad magic)");

  Dictionary dict;
  const auto d = static_cast<Eigen::Index>(r.u64());
  const auto M = static_cast<Eigen::Index>(r.u64());
  dict.window_count = static_cast<int>(r.u32());
  const auto C = r.u32();
  if (C < 1 || C > 100000 || dict.window_count < 1 || d < 1 || M < 1 || d > (1 << 24) || M > (1 << 24))
    throw std::runtime_error("model file: implausible header");
  for (std::uint32_t c = 0; c < C; ++c) dict.labels.classes.push_back(r.str());

  ModelParams p;
  p.lasso.lambda = r.f64();
  p.windows.count = dict.window_count;
  p.windows.half_width = static_cast<int>(r.u32());
  const auto n_lengths = r.u32();
  if (n_lengths > 1024) throw std::runtime_error("model file: implausible online length count");
  p.windows.online_lengths.clear();
  for (std::uint32_t i = 0; i < n_lengths; ++i) p.windows.online_lengths.push_back(static_cast<int>(r.u32()));
  p.lasso.tol = r.f64();
  p.lasso.max_iter = static_cast<int>(r.u32());
  p.lasso.kkt_tol = r.f64();
  p.eps = r.f64();
  p.pool_size = static_cast<int>(r.u32());
  const double mu1 = r.f64();
  r.f64();  // mu2 is always 1 - mu1
  p.fusion = FusionWeights::from_dict_weight(mu1);
  const auto reference = static_cast<Eigen::Index>(r.u64());

  dict.atoms.resize(d, M);
  for (Eigen::Index k = 0; k < dict.atoms.size(); ++k) dict.atoms.data()[k] = r.f64();
  dict.meta.resize(static_cast<std::size_t>(M));
  for (auto& m : dict.meta) {
    m.label = static_cast<int>(r.u32());
    m.window = static_cast<int>(r.u32());
    m.example = static_cast<int>(r.u32());
    if (m.label < 0 || m.label >= static_cast<int>(C) || m.window < 1 || m.window > dict.window_count)
      throw std::runtime_error("model file: atom metadata out of range");
  }

  const auto joints = static_cast<Eigen::Index>(r.u32());
  const auto n_train = r.u64();
  if (joints < 2 || n_train < 1 || n_train > (1u << 24)) throw std::runtime_error("model file: implausible training block");
  std::vector<ActionSequence> training;
  training.reserve(n_train);
  dict.labels.counts.assign(C, 0);
  for (std::uint64_t i = 0; i < n_train; ++i) {
    ActionSequence s;
    const auto label = r.u32();
    if (label >= C) throw std::runtime_error("model file: training label out of range");
    ++dict.labels.counts[label];
    s.label = dict.labels.classes[label];
    s.subject = r.i32();
    s.trial = r.i32();
    s.id = r.str();
    const auto F = r.u64();
    if (F < 1 || F > (1u << 24)) throw std::runtime_error("model file: implausible frame count");
    s.frames.reserve(F);
    for (std::uint64_t f = 0; f < F; ++f) {
      JointFrame frame(joints, 3);
      for (Eigen::Index j = 0; j < joints; ++j)
        for (Eigen::Index a = 0; a < 3; ++a) frame(j, a) = r.f64();
      s.frames.push_back(std::move(frame));
    }
    training.push_back(std::move(s));
  }
  return Model(std::move(dict), std::move(training), p, reference);
}

std::string model_bytes(const Model& model) {
  std::ostringstream out(std::ios::binary);
  write_model(out, model);
  return std::move(out).str();
}

void save_model(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model " + path.string());
  write_model(out, model);
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model " + path.string());
  return read_model(in);
}

}  // namespace slidedict
