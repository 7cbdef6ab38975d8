#include "slidedict/trace_io.hpp"

#include <glob.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace slidedict {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_trace_csv(std::ostream& out, const ScoreTrace& trace, const std::vector<std::string>& classes) {
  if (static_cast<int>(classes.size()) != trace.class_count())
    throw std::invalid_argument("write_trace_csv: class names do not match the trace");
  out << "step,class,tau,cumulative\n";
  for (std::size_t i = 0; i < trace.steps_seen(); ++i) {
    for (int c = 0; c < trace.class_count(); ++c) {
      out << trace.steps()[i] << ',' << classes[static_cast<std::size_t>(c)] << ',' << fmt(trace.taus()[i](c)) << ','
          << fmt(trace.cumulative_history()[i](c)) << '\n';
    }
  }
}

std::vector<TraceRow> read_trace_csv(std::istream& in, const std::string& source) {
  auto fail = [&](std::size_t line, const std::string& why) {
    throw std::runtime_error(source + ":" + std::to_string(line) + ": " + why);
  };
  std::string line;
  std::size_t line_no = 0;
  std::vector<TraceRow> rows;
  if (!std::getline(in, line)) fail(1, "empty trace");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "step,class,tau,cumulative") fail(1, "bad header");
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 4) fail(line_no, "expected 4 columns");
    TraceRow row;
    row.label = f[1];
    try {
      std::size_t used = 0;
      row.step = std::stol(f[0], &used);
      if (used != f[0].size()) throw std::invalid_argument("step");
      row.tau = std::stod(f[2], &used);
      if (used != f[2].size()) throw std::invalid_argument("tau");
      row.cumulative = std::stod(f[3], &used);
      if (used != f[3].size()) throw std::invalid_argument("cumulative");
    } catch (const std::exception&) {
      fail(line_no, "malformed number");
    }
    if (!(row.tau >= -1e-9 && row.tau <= 1 + 1e-9)) fail(line_no, "tau outside [0, 1]");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(line_no, "trace has no rows");

  // class set from the first step; every step must list it in the same order
  std::vector<std::string> classes;
  for (const auto& r : rows) {
    if (r.step != rows.front().step) break;
    classes.push_back(r.label);
  }
  if (rows.size() % classes.size() != 0) fail(line_no, "incomplete final step");
  std::map<std::string, double> running;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.label != classes[i % classes.size()] || r.step != rows[i - i % classes.size()].step)
      fail(i + 2, "inconsistent class layout");
    running[r.label] += r.tau;
    if (std::abs(running[r.label] - r.cumulative) > 1e-6 * std::max(1.0, std::abs(r.cumulative)))
      fail(i + 2, "cumulative column is not the running sum of tau");
  }
  return rows;
}

std::vector<TraceFile> load_traces(std::span<const std::filesystem::path> paths) {
  if (paths.empty()) throw std::invalid_argument("no trace files given");
  std::vector<TraceFile> out;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open trace " + p.string());
    out.push_back({p.stem().string(), read_trace_csv(in, p.string())});
  }
  return out;
}

void write_score_evolution_csv(std::ostream& out, std::span<const TraceFile> traces) {
  out << "sequence,step,class,tau,cumulative\n";
  for (const auto& t : traces)
    for (const auto& r : t.rows)
      out << t.name << ',' << r.step << ',' << r.label << ',' << fmt(r.tau) << ',' << fmt(r.cumulative) << '\n';
}

void write_final_scores_csv(std::ostream& out, std::span<const TraceFile> traces) {
  out << "sequence,class,cumulative,predicted\n";
  for (const auto& t : traces) {
    const long last = t.rows.back().step;
    std::vector<const TraceRow*> final_rows;
    for (const auto& r : t.rows)
      if (r.step == last) final_rows.push_back(&r);
    const auto* best = *std::max_element(final_rows.begin(), final_rows.end(),
                                         [](const TraceRow* a, const TraceRow* b) { return a->cumulative < b->cumulative; });
    for (const auto* r : final_rows)
      out << t.name << ',' << r->label << ',' << fmt(r->cumulative) << ',' << (r == best ? 1 : 0) << '\n';
  }
}

std::vector<std::filesystem::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::filesystem::path> out;
  if (rc == 0)
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  globfree(&g);
  if (rc != 0 && rc != GLOB_NOMATCH) throw std::runtime_error("glob failed for '" + pattern + "'");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace slidedict
