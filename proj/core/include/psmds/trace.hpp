#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace psmds {

enum class TerminationReason { radius_below_delta, max_epochs, stress_converged };

const char* to_string(TerminationReason reason) noexcept;

struct TraceRecord {
  std::size_t epoch = 0;
  double error = 0.0;
  double radius = 0.0;  // NaN for solvers without a step length
  double elapsed_sec = 0.0;
};

/// Per-epoch history of a solver run. Record 0 is the initial state.
struct ConvergenceTrace {
  std::vector<TraceRecord> records;
  TerminationReason termination_reason = TerminationReason::max_epochs;
  /// Free-form metadata written as `# key=value` lines above the CSV header.
  std::map<std::string, std::string> metadata;

  /// Number of completed epochs (records minus the initial one).
  std::size_t epochs() const noexcept { return records.empty() ? 0 : records.size() - 1; }
  double final_error() const;
};

/// Writes `# key=value` metadata lines followed by `epoch,error,radius,elapsed_sec`.
void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);
void write_trace_csv(const std::string& path, const ConvergenceTrace& trace);

/// Inverse of write_trace_csv. Throws InvalidArgument on malformed input.
ConvergenceTrace read_trace_csv(std::istream& in);

}  // namespace psmds
