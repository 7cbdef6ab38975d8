#include "slidedict/model_io.hpp"
#include "slidedict/scoring.hpp"
#include "slidedict/synth.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

using namespace slidedict;

namespace {

std::vector<ActionSequence> training_set(std::uint64_t seed) {
  SynthSpec spec;
  spec.joints = 6;
  spec.frames_min = 24;
  spec.frames_max = 40;
  spec.noise_sigma = 0.02;
  spec.seed = seed;
  auto data = generate(spec, 3, 3);
  return split_cross_subject(data.sequences, SplitRule::OddTrain).train;
}

ModelParams small_params() {
  ModelParams p;
  p.windows.count = 3;
  p.windows.half_width = 1;
  p.windows.online_lengths = {6, 12};
  p.lasso.lambda = 0.05;
  p.pool_size = 2;
  p.fusion = FusionWeights(0.7, 0.3);
  return p;
}

}  // namespace

TEST_CASE("dictionary size is W times the number of training sequences") {
  const auto train = training_set(3);
  const auto model = Model::train(train, small_params());
  CHECK(model.dictionary().size() == 3 * static_cast<Eigen::Index>(train.size()));
  const auto& counts = model.labels().counts;
  CHECK(std::accumulate(counts.begin(), counts.end(), 0) == static_cast<int>(train.size()));
}

TEST_CASE("save, load, save is byte identical") {
  const auto model = Model::train(training_set(5), small_params());
  const std::string bytes = model_bytes(model);
  REQUIRE(bytes.size() > 8);
  CHECK(static_cast<std::uint8_t>(bytes[0]) == kModelFormatVersion);
  CHECK(bytes.substr(1, 4) == "SDCT");

  std::istringstream in(bytes);
  const auto reloaded = read_model(in);
  CHECK(model_bytes(reloaded) == bytes);
  CHECK(reloaded.params().fusion.dict() == model.params().fusion.dict());
  CHECK(reloaded.params().fusion.diff() == model.params().fusion.diff());
  CHECK(reloaded.reference_length() == model.reference_length());
  CHECK(reloaded.labels().classes == model.labels().classes);

  const auto path = std::filesystem::temp_directory_path() / "slidedict_test_model.bin";
  save_model(path, model);
  CHECK(model_bytes(load_model(path)) == bytes);
  std::filesystem::remove(path);
}

TEST_CASE("reloaded model classifies bit-identically") {
  SynthSpec spec;
  spec.joints = 6;
  spec.frames_min = 24;
  spec.frames_max = 40;
  spec.noise_sigma = 0.05;
  spec.seed = 9;
  const auto data = generate(spec, 4, 4);
  const auto split = split_cross_subject(data.sequences, SplitRule::OddTrain);
  const auto model = Model::train(split.train, small_params());
  std::istringstream in(model_bytes(model));
  const auto reloaded = read_model(in);
  for (const auto& s : split.test) {
    const auto a = classify_offline(s, model);
    const auto b = classify_offline(s, reloaded);
    CHECK(a.trace == b.trace);
    CHECK(a.decision.label == b.decision.label);
    CHECK(a.decision.confidence == b.decision.confidence);

    OnlineClassifier oa(model), ob(reloaded);
    oa.push(std::span<const JointFrame>(s.frames));
    ob.push(std::span<const JointFrame>(s.frames));
    oa.finish();
    ob.finish();
    CHECK(oa.trace() == ob.trace());
  }
}

TEST_CASE("corrupt containers are rejected") {
  const auto model = Model::train(training_set(7), small_params());
  const std::string bytes = model_bytes(model);

  auto bad_version = bytes;
  bad_version[0] = static_cast<char>(kModelFormatVersion + 1);
  std::istringstream v(bad_version);
  CHECK_THROWS_AS(read_model(v), std::runtime_error);

  auto bad_magic = bytes;
  bad_magic[2] = 'X';
  std::istringstream m(bad_magic);
  CHECK_THROWS_AS(read_model(m), std::runtime_error);

  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, bytes.size() / 2, bytes.size() - 1}) {
    std::istringstream t(bytes.substr(0, cut));
    CHECK_THROWS_AS(read_model(t), std::runtime_error);
  }

  CHECK_THROWS(load_model("/nonexistent/slidedict.bin"));
}
