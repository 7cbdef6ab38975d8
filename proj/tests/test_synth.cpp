#include "slidedict/scoring.hpp"
#include "slidedict/synth.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace slidedict;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("generation is deterministic in the seed") {
  SynthSpec spec;
  spec.noise_sigma = 0.01;
  spec.seed = 11;
  const auto a = generate(spec, 2, 2);
  const auto b = generate(spec, 2, 2);
  REQUIRE(a.sequences.size() == b.sequences.size());
  for (std::size_t i = 0; i < a.sequences.size(); ++i) {
    CHECK(a.sequences[i].id == b.sequences[i].id);
    REQUIRE(a.sequences[i].frames.size() == b.sequences[i].frames.size());
    for (std::size_t n = 0; n < a.sequences[i].frames.size(); ++n)
      CHECK(a.sequences[i].frames[n] == b.sequences[i].frames[n]);
  }

  const auto root = std::filesystem::temp_directory_path() / "slidedict_synth_test";
  std::filesystem::remove_all(root);
  write_dataset(a, root / "a");
  write_dataset(b, root / "b");
  for (const auto& e : a.manifest.entries) CHECK(slurp(root / "a" / e.path) == slurp(root / "b" / e.path));
  CHECK(slurp(root / "a" / "manifest.json") == slurp(root / "b" / "manifest.json"));

  const auto loaded = load_dataset(load_manifest(root / "a" / "manifest.json"));
  REQUIRE(loaded.size() == a.sequences.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(*loaded[i].label == *a.sequences[i].label);
    CHECK(loaded[i].subject == a.sequences[i].subject);
    CHECK(loaded[i].frames.back().isApprox(a.sequences[i].frames.back(), 1e-7));
  }
  std::filesystem::remove_all(root);

  spec.seed = 12;
  CHECK_FALSE(generate(spec, 2, 2).sequences[0].frames[0] == a.sequences[0].frames[0]);
}

TEST_CASE("counts, lengths, and subject assignment") {
  SynthSpec spec;
  spec.classes = 4;
  spec.joints = 5;
  spec.frames_min = 10;
  spec.frames_max = 12;
  const auto one = generate(spec, 1, 1);
  CHECK(one.sequences.size() == 4);
  CHECK(one.manifest.entries.size() == 4);

  const auto many = generate(spec, 6, 3);
  CHECK(many.sequences.size() == 24);
  for (const auto& s : many.sequences) {
    CHECK(s.joint_count() == 5);
    CHECK(s.frame_count() >= 10);
    CHECK(s.frame_count() <= 12);
    CHECK(s.subject >= 1);
    CHECK(s.subject <= 3);
    CHECK(validate_sequence(s).empty());
  }
  CHECK(LabelSet::from_sequences(many.sequences).counts == std::vector<int>{6, 6, 6, 6});
}

TEST_CASE("every class moves at least three joints") {
  SynthSpec spec;
  spec.classes = 5;
  spec.joints = 4;
  for (std::uint64_t seed = 1; seed < 30; ++seed) {
    spec.seed = seed;
    for (const auto& m : class_motions(spec)) CHECK((m.amplitude.rowwise().norm().array() > 0).count() >= 3);
  }
}

TEST_CASE("spec validation") {
  SynthSpec spec;
  spec.joints = 1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = {};
  spec.frames_max = spec.frames_min - 1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = {};
  spec.noise_sigma = -1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = {};
  spec.classes = 2;
  spec.joints = 3;
  ClassMotion m{1.0, Eigen::MatrixXd::Constant(3, 3, 0.1), Eigen::VectorXd::Zero(3)};
  spec.motions = {m, m};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.motions[1].frequency = 2.0;
  CHECK_NOTHROW(spec.validate());
  spec.motions.pop_back();
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  CHECK_THROWS_AS(generate(SynthSpec{}, 0, 1), std::invalid_argument);
}

TEST_CASE("noise-free classes are recognized on held-out subjects") {
  SynthSpec spec;
  spec.joints = 10;
  spec.seed = 5;
  const auto data = generate(spec, 6, 6);
  const auto split = split_cross_subject(data.sequences, SplitRule::OddTrain);
  ModelParams params;
  params.windows.count = 4;
  params.windows.half_width = 1;
  const auto model = Model::train(split.train, params);
  for (const auto& s : split.test)
    CHECK(model.labels().classes[static_cast<std::size_t>(classify_offline(s, model).decision.label)] == *s.label);
}
