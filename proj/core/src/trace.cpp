#include "psmds/trace.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "psmds/errors.hpp"

namespace psmds {

const char* to_string(TerminationReason reason) noexcept {
  switch (reason) {
    case TerminationReason::radius_below_delta: return "radius_below_delta";
    case TerminationReason::max_epochs: return "max_epochs";
    case TerminationReason::stress_converged: return "stress_converged";
  }
  return "unknown";
}

double ConvergenceTrace::final_error() const {
  if (records.empty()) throw InvalidArgument("empty convergence trace");
  return records.back().error;
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
  for (const auto& [key, value] : trace.metadata) out << "# " << key << '=' << value << '\n';
  out << "# termination_reason=" << to_string(trace.termination_reason) << '\n';
  out << "epoch,error,radius,elapsed_sec\n";
  out << std::setprecision(17);
  for (const auto& r : trace.records) {
    out << r.epoch << ',' << r.error << ',';
    if (std::isnan(r.radius)) {
      out << "nan";
    } else {
      out << r.radius;
    }
    out << ',' << r.elapsed_sec << '\n';
  }
}

void write_trace_csv(const std::string& path, const ConvergenceTrace& trace) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open trace file for writing: " + path);
  write_trace_csv(out, trace);
}

ConvergenceTrace read_trace_csv(std::istream& in) {
  ConvergenceTrace trace;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto body = line.substr(line.find_first_not_of("# "));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const auto key = body.substr(0, eq);
      const auto value = body.substr(eq + 1);
      if (key == "termination_reason") {
        if (value == "radius_below_delta") trace.termination_reason = TerminationReason::radius_below_delta;
        else if (value == "stress_converged") trace.termination_reason = TerminationReason::stress_converged;
        else trace.termination_reason = TerminationReason::max_epochs;
      } else {
        trace.metadata[key] = value;
      }
      continue;
    }
    if (!header_seen) {
      if (line != "epoch,error,radius,elapsed_sec")
        throw InvalidArgument("unexpected trace header: " + line);
      header_seen = true;
      continue;
    }
    std::istringstream fields(line);
    std::string cell;
    TraceRecord r;
    std::getline(fields, cell, ',');
    r.epoch = std::stoul(cell);
    std::getline(fields, cell, ',');
    r.error = std::stod(cell);
    std::getline(fields, cell, ',');
    r.radius = cell == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(cell);
    std::getline(fields, cell, ',');
    r.elapsed_sec = std::stod(cell);
    trace.records.push_back(r);
  }
  if (!header_seen) throw InvalidArgument("trace CSV has no header");
  return trace;
}

}  // namespace psmds
