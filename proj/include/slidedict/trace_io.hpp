#pragma once

#include "slidedict/fusion.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace slidedict {

/// One row of a trace CSV (`step,class,tau,cumulative`).
struct TraceRow {
  long step = 0;
  std::string label;
  double tau = 0.0;
  double cumulative = 0.0;
};

void write_trace_csv(std::ostream& out, const ScoreTrace& trace, const std::vector<std::string>& classes);

/// Parses and checks a trace: consistent class set per step, tau in [0, 1],
/// cumulative equal to the running sum of tau (1e-6 for the 9-digit text).
std::vector<TraceRow> read_trace_csv(std::istream& in, const std::string& source = "<trace>");

struct TraceFile {
  std::string name;  // file stem, used as the sequence id
  std::vector<TraceRow> rows;
};

/// Reads every trace; throws on an empty list or any unreadable/corrupt file.
std::vector<TraceFile> load_traces(std::span<const std::filesystem::path> paths);

/// Long format: sequence,step,class,tau,cumulative.
void write_score_evolution_csv(std::ostream& out, std::span<const TraceFile> traces);
/// Final cumulative score per class and the winning class per sequence.
void write_final_scores_csv(std::ostream& out, std::span<const TraceFile> traces);

/// Files matching a shell-style pattern, sorted.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

}  // namespace slidedict
