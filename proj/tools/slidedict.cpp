// Command-line front end: synth, train, eval, stream, report.

#include "slidedict/config.hpp"
#include "slidedict/evaluation.hpp"
#include "slidedict/model_io.hpp"
#include "slidedict/scoring.hpp"
#include "slidedict/synth.hpp"
#include "slidedict/trace_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace slidedict;

namespace {

// Applies `--key value` / `--key=value` extras whose key is a config key.
void apply_overrides(Config& config, const std::vector<std::string>& extras) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string arg = extras[i];
    if (arg.rfind("--", 0) != 0) throw std::invalid_argument("unexpected argument '" + arg + "'");
    arg.erase(0, 2);
    std::string value;
    if (const auto eq = arg.find('='); eq != std::string::npos) {
      value = arg.substr(eq + 1);
      arg.erase(eq);
    } else {
      if (i + 1 >= extras.size()) throw std::invalid_argument("missing value for --" + arg);
      value = extras[++i];
    }
    config.set(arg, value);
  }
}

Config load_config(const std::string& path, const std::vector<std::string>& extras) {
  Config config = path.empty() ? Config{} : Config::load(path);
  apply_overrides(config, extras);
  return config;
}

std::vector<ActionSequence> test_split(const ExperimentConfig& ex) {
  if (ex.manifest.empty()) throw std::invalid_argument("dataset.manifest is not set");
  return split_cross_subject(load_manifest(ex.manifest), ex.split_rule, ex.split_subjects).test;
}

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

int cmd_train(const Config& config, const fs::path& out_path) {
  const auto ex = ExperimentConfig::from(config);
  if (ex.manifest.empty()) throw std::invalid_argument("dataset.manifest is not set");
  const auto manifest = load_manifest(ex.manifest);
  if (manifest.entries.empty()) throw std::invalid_argument("manifest has no entries");
  const auto split = split_cross_subject(manifest, ex.split_rule, ex.split_subjects);
  const auto model = Model::train(split.train, ex.params);
  save_model(out_path, model);
  std::cout << "trained " << model.class_count() << " classes from " << split.train.size() << " sequences: "
            << model.dictionary().size() << " atoms of dimension " << model.dictionary().dimension() << "\n";
  return 0;
}

int cmd_eval(const Config& config, const fs::path& model_path) {
  const auto ex = ExperimentConfig::from(config);
  const auto model = load_model(model_path);
  const auto tests = test_split(ex);
  const auto outcomes = evaluate_offline(model, tests, resolve_workers(ex.workers));
  std::vector<int> truth, pred;
  auto predictions = open_out(ex.output_dir / "predictions.csv");
  predictions << "sequence,truth,predicted\n";
  for (const auto& o : outcomes) {
    truth.push_back(o.truth);
    pred.push_back(o.result.decision.label);
    predictions << o.id << ',' << model.labels().classes[static_cast<std::size_t>(o.truth)] << ','
                << model.labels().classes[static_cast<std::size_t>(o.result.decision.label)] << '\n';
  }
  const auto report = summarize(model.labels().classes, truth, pred);
  auto confusion = open_out(ex.output_dir / "confusion.csv");
  write_confusion_csv(confusion, report);
  auto summary = open_out(ex.output_dir / "summary.txt");
  write_summary(summary, report);
  write_summary(std::cout, report);
  return 0;
}

int cmd_stream(const Config& config, const fs::path& model_path, const std::string& fraction_text) {
  const auto ex = ExperimentConfig::from(config);
  const auto model = load_model(model_path);
  const auto tests = test_split(ex);
  const auto fractions = parse_fractions(fraction_text);
  const auto outcomes = evaluate_stream(model, tests, fractions, resolve_workers(ex.workers));

  EvalReport report;
  report.fractions = fractions;
  std::vector<int> truth;
  for (const auto& o : outcomes) truth.push_back(o.truth);
  for (std::size_t q = 0; q < fractions.size(); ++q) {
    std::vector<int> pred;
    for (const auto& o : outcomes) pred.push_back(o.predictions[q]);
    const auto r = summarize(model.labels().classes, truth, pred);
    report.curve.push_back(r.accuracy);
    if (q + 1 == fractions.size()) {
      report.classes = r.classes;
      report.confusion = r.confusion;
      report.accuracy = r.accuracy;
      report.per_class_accuracy = r.per_class_accuracy;
    }
  }
  auto curve = open_out(ex.output_dir / "curve.csv");
  write_curve_csv(curve, report);
  for (const auto& o : outcomes) {
    auto trace = open_out(ex.output_dir / "traces" / (o.id + ".csv"));
    write_trace_csv(trace, o.trace, model.labels().classes);
  }
  write_curve_csv(std::cout, report);
  return 0;
}

int cmd_synth(const Config& config, const fs::path& out_dir) {
  const auto req = SynthRequest::from(config);
  const auto data = generate(req.spec, req.n_per_class, req.subjects);
  write_dataset(data, out_dir);
  std::cout << "wrote " << data.sequences.size() << " sequences to " << out_dir.string() << "\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& patterns, const fs::path& out_dir) {
  std::vector<fs::path> paths;
  for (const auto& p : patterns) {
    const auto matched = expand_glob(p);
    if (matched.empty()) throw std::runtime_error("no trace files match '" + p + "'");
    paths.insert(paths.end(), matched.begin(), matched.end());
  }
  const auto traces = load_traces(paths);
  auto evolution = open_out(out_dir / "score_evolution.csv");
  write_score_evolution_csv(evolution, traces);
  auto finals = open_out(out_dir / "final_scores.csv");
  write_final_scores_csv(finals, traces);
  std::cout << "merged " << traces.size() << " traces into " << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skeleton action recognition with sliding-dictionary sparse coding"};
  app.require_subcommand(1);

  std::string config_path, model_path, out_path, fractions = "0.1..1.0", spec_path, out_dir = "report";
  std::vector<std::string> trace_patterns;

  auto* train = app.add_subcommand("train", "Build a model from the training split");
  train->add_option("--config", config_path, "Experiment config file")->required();
  train->add_option("--out", out_path, "Model file to write")->required();
  train->allow_extras();

  auto* eval = app.add_subcommand("eval", "Offline evaluation on the test split");
  eval->add_option("--config", config_path)->required();
  eval->add_option("--model", model_path)->required();
  eval->allow_extras();

  auto* stream = app.add_subcommand("stream", "Frame-by-frame replay of the test split");
  stream->add_option("--config", config_path)->required();
  stream->add_option("--model", model_path)->required();
  stream->add_option("--fractions", fractions, "e.g. 0.1..1.0 or 0.25,0.5,1");
  stream->allow_extras();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--spec", spec_path, "Synthetic spec (synth.* keys)");
  synth->add_option("--out-dir", out_dir, "Output directory")->required();
  synth->allow_extras();

  auto* report = app.add_subcommand("report", "Merge score traces into plot-ready CSVs");
  report->add_option("--traces", trace_patterns, "Trace file glob(s)")->required();
  report->add_option("--out-dir", out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return cmd_train(load_config(config_path, train->remaining()), out_path);
    if (*eval) return cmd_eval(load_config(config_path, eval->remaining()), model_path);
    if (*stream) return cmd_stream(load_config(config_path, stream->remaining()), model_path, fractions);
    if (*synth) return cmd_synth(load_config(spec_path, synth->remaining()), out_dir);
    if (*report) return cmd_report(trace_patterns, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
