#include "slidedict/config.hpp"
#include "slidedict/evaluation.hpp"
#include "slidedict/synth.hpp"
#include "slidedict/trace_io.hpp"

#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace slidedict;

TEST_CASE("config parsing") {
  std::istringstream in(R"(# experiment
dataset.manifest = data/manifest.json
windows.W = 6   # trailing comment
windows.online_lengths = 4, 8
fusion.mu1 = 0.25
split.rule = listed-subjects
split.subjects = 1,3
)");
  auto cfg = Config::parse(in);
  cfg.base_dir = "/tmp/exp";
  const auto ex = ExperimentConfig::from(cfg);
  CHECK(ex.manifest == std::filesystem::path("/tmp/exp/data/manifest.json"));
  CHECK(ex.params.windows.count == 6);
  CHECK(ex.params.windows.half_width == 2);
  CHECK(ex.params.windows.online_lengths == std::vector<int>{4, 8});
  CHECK(ex.params.fusion.dict() == 0.25);
  CHECK(ex.params.fusion.diff() == 0.75);
  CHECK(ex.split_rule == SplitRule::ListedSubjects);
  CHECK(ex.split_subjects == std::vector<int>{1, 3});
  CHECK(ex.params.lasso.lambda == 0.1);
  CHECK(ex.params.pool_size == 3);

  cfg.set("windows.W", "9");
  CHECK(ExperimentConfig::from(cfg).params.windows.count == 9);
  CHECK_THROWS_AS(cfg.set("windows.Q", "1"), std::invalid_argument);

  std::istringstream unknown("sparse.lamda = 0.1\n");
  CHECK_THROWS_AS(Config::parse(unknown), std::invalid_argument);
  std::istringstream no_eq("windows.W 8\n");
  CHECK_THROWS_AS(Config::parse(no_eq), std::invalid_argument);

  Config bad;
  bad.set("windows.W", "eight");
  CHECK_THROWS_AS(ExperimentConfig::from(bad), std::invalid_argument);
  Config zero;
  zero.set("windows.W", "0");
  CHECK_THROWS_AS(ExperimentConfig::from(zero), std::invalid_argument);
  Config listed;
  listed.set("split.rule", "listed-subjects");
  CHECK_THROWS_AS(ExperimentConfig::from(listed), std::invalid_argument);
}

TEST_CASE("synth request from config") {
  Config cfg;
  cfg.set("synth.classes", "4");
  cfg.set("synth.noise_sigma", "0.05");
  cfg.set("synth.n_per_class", "3");
  const auto req = SynthRequest::from(cfg);
  CHECK(req.spec.classes == 4);
  CHECK(req.spec.noise_sigma == 0.05);
  CHECK(req.n_per_class == 3);
  CHECK(req.subjects == 10);
}

TEST_CASE("frame fractions") {
  const auto r = parse_fractions("0.1..1.0");
  CHECK(r.size() == 10);
  CHECK(r.front() == 0.1);
  CHECK(r.back() == 1.0);
  CHECK(parse_fractions("1.0,0.5,0.5") == std::vector<double>{0.5, 1.0});
  CHECK_THROWS_AS(parse_fractions("0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_fractions("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_fractions("0.5..0.2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_fractions("x"), std::invalid_argument);
}

TEST_CASE("summaries") {
  const std::vector<std::string> classes{"a", "b", "c"};
  const std::vector<int> truth{0, 0, 1, 1, 2, 2};
  const std::vector<int> pred{0, 1, 1, 1, 2, -1};
  const auto r = summarize(classes, truth, pred);
  CHECK(r.accuracy == doctest::Approx(4.0 / 6));
  CHECK(r.confusion.sum() == 5);
  CHECK(r.confusion(0, 1) == 1);
  CHECK(r.per_class_accuracy(0) == 0.5);
  CHECK(r.per_class_accuracy(1) == 1.0);
  CHECK(r.per_class_accuracy(2) == 0.5);
  std::ostringstream csv;
  write_confusion_csv(csv, r);
  CHECK(csv.str() == "truth,a,b,c\na,1,1,0\nb,0,2,0\nc,0,0,1\n");
  CHECK_THROWS_AS(summarize(classes, truth, std::vector<int>{0}), std::invalid_argument);
}

TEST_CASE("parallel_for covers every index and propagates errors") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

namespace {

ScoreTrace ten_step_trace() {
  ScoreTrace t(3);
  for (long s = 0; s < 10; ++s) {
    Eigen::Vector3d tau(0.2 + 0.01 * s, 0.5 - 0.01 * s, 0.3);
    t.append(s, tau);
  }
  return t;
}

}  // namespace

TEST_CASE("trace CSV round trip and corruption") {
  const auto trace = ten_step_trace();
  const std::vector<std::string> names{"a", "b", "c"};
  std::ostringstream out;
  write_trace_csv(out, trace, names);
  std::istringstream in(out.str());
  const auto rows = read_trace_csv(in);
  REQUIRE(rows.size() == 30);
  CHECK(rows[29].cumulative == doctest::Approx(trace.cumulative()(2)));
  CHECK(rows[3].step == 1);
  CHECK(rows[3].label == "a");

  auto text = out.str();
  const auto pos = text.find("\n0,b,");
  REQUIRE(pos != std::string::npos);
  auto broken = text;
  broken.replace(pos + 5, 1, "9");  // tau 0.5 -> 9.5
  std::istringstream b1(broken);
  CHECK_THROWS_AS(read_trace_csv(b1), std::runtime_error);

  std::istringstream b2("step,class,tau,cumulative\n0,a,0.5,0.5\n0,b,0.5,0.4\n");
  CHECK_THROWS_AS(read_trace_csv(b2), std::runtime_error);
  std::istringstream b3("step,class,tau\n");
  CHECK_THROWS_AS(read_trace_csv(b3), std::runtime_error);
  std::istringstream b4("step,class,tau,cumulative\n0,a,0.5,0.5\n0,b,0.5,0.5\n1,a,0.5,1.0\n");
  CHECK_THROWS_AS(read_trace_csv(b4), std::runtime_error);
  CHECK_THROWS_AS(write_trace_csv(out, trace, {"a"}), std::invalid_argument);
}

TEST_CASE("report over trace files") {
  const auto dir = std::filesystem::temp_directory_path() / "slidedict_report_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "seq1.csv");
    write_trace_csv(f, ten_step_trace(), {"a", "b", "c"});
  }
  const auto paths = expand_glob((dir / "*.csv").string());
  REQUIRE(paths.size() == 1);
  const auto traces = load_traces(paths);
  std::ostringstream evo, fin;
  write_score_evolution_csv(evo, traces);
  write_final_scores_csv(fin, traces);
  const auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
  CHECK(lines(evo.str()) == 31);
  CHECK(evo.str().rfind("sequence,step,class,tau,cumulative\nseq1,0,a,", 0) == 0);
  CHECK(lines(fin.str()) == 4);
  CHECK(fin.str().find("seq1,b,") != std::string::npos);
  // class b has the largest total (4.55 vs 2.45, 3.0)
  std::istringstream fin_lines(fin.str());
  std::string line, winner;
  while (std::getline(fin_lines, line))
    if (line.size() > 2 && line.compare(line.size() - 2, 2, ",1") == 0) winner = line;
  CHECK(winner.rfind("seq1,b,", 0) == 0);

  CHECK(expand_glob((dir / "*.none").string()).empty());
  CHECK_THROWS_AS(load_traces({}), std::invalid_argument);
  const std::vector<std::filesystem::path> missing{dir / "nope.csv"};
  CHECK_THROWS_AS(load_traces(missing), std::runtime_error);
  std::filesystem::remove_all(dir);
}

namespace {

struct Experiment {
  Model model;
  std::vector<ActionSequence> tests;
};

Experiment constant_length_experiment(int online_length) {
  SynthSpec spec;
  spec.joints = 10;
  spec.frames_min = spec.frames_max = 40;
  spec.noise_sigma = 0.05;
  spec.seed = 17;
  const auto data = generate(spec, 6, 6);
  auto split = split_cross_subject(data.sequences, SplitRule::OddTrain);
  ModelParams params;
  params.windows.count = 4;
  params.windows.half_width = 1;
  params.windows.online_lengths = {online_length};
  return {Model::train(split.train, params), std::move(split.test)};
}

}  // namespace

TEST_CASE("stream accuracy at the full sequence equals offline accuracy for aligned windows") {
  // F = 40, W = 4: every offline window has 16 frames
  REQUIRE(segment(40, 4).front().size() == 16);
  const auto ex = constant_length_experiment(16);
  const auto offline = evaluate_offline(ex.model, ex.tests, 2);
  const std::vector<double> full{1.0};
  const auto online = evaluate_stream(ex.model, ex.tests, full, 2);
  std::vector<int> truth, off_pred, on_pred;
  for (std::size_t i = 0; i < offline.size(); ++i) {
    truth.push_back(offline[i].truth);
    off_pred.push_back(offline[i].result.decision.label);
    on_pred.push_back(online[i].predictions[0]);
  }
  const auto a = summarize(ex.model.labels().classes, truth, off_pred);
  const auto b = summarize(ex.model.labels().classes, truth, on_pred);
  CHECK(a.accuracy == b.accuracy);
  // confusion rows account for every test sequence of the class
  for (Eigen::Index c = 0; c < a.confusion.rows(); ++c) CHECK(a.confusion.row(c).sum() == 3);
}

TEST_CASE("identical inputs give identical reports") {
  const auto ex = constant_length_experiment(12);
  const std::vector<double> fractions{0.3, 0.6, 1.0};
  const auto run = [&](int workers) {
    std::ostringstream out;
    for (const auto& o : evaluate_offline(ex.model, ex.tests, workers)) {
      write_trace_csv(out, o.result.trace, ex.model.labels().classes);
      out << o.id << ',' << o.result.decision.label << '\n';
    }
    for (const auto& o : evaluate_stream(ex.model, ex.tests, fractions, workers)) {
      write_trace_csv(out, o.trace, ex.model.labels().classes);
      for (int p : o.predictions) out << p << ',';
    }
    return out.str();
  };
  const auto first = run(1);
  CHECK(first == run(1));
  CHECK(first == run(3));
}
