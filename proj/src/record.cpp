#include "mospsa/record.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mospsa {

const char* const kRecordHeader =
    "step\tL_blackbox\tL_whitebox\tactive_index\tI_k\tstep_size\tcumulative_calls";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_record_file(const std::string& path, const RunResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open record file for writing: " + path);
  out << kRecordHeader << '\n';
  for (const StepRecord& r : result.trajectory) {
    out << r.step << '\t' << format_double(r.l_blackbox) << '\t'
        << format_double(r.l_whitebox) << '\t' << r.active_index << '\t'
        << format_double(r.indicator) << '\t' << format_double(r.step_size) << '\t'
        << r.cumulative_calls << '\n';
  }
  if (result.truncated) out << "# truncated: budget exhausted\n";
  if (result.early_stopped) out << "# early-stop: trajectory stabilized\n";
  if (!out) throw std::runtime_error("write failed for record file: " + path);
}

RunResult read_record_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open record file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader) {
    throw std::runtime_error("bad record header in " + path);
  }
  RunResult result;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("truncated") != std::string::npos) result.truncated = true;
      if (line.find("early-stop") != std::string::npos) result.early_stopped = true;
      continue;
    }
    std::istringstream ss(line);
    StepRecord r;
    if (!(ss >> r.step >> r.l_blackbox >> r.l_whitebox >> r.active_index >> r.indicator >>
          r.step_size >> r.cumulative_calls)) {
      throw std::runtime_error("bad record row in " + path + ": " + line);
    }
    result.trajectory.push_back(r);
  }
  return result;
}

}  // namespace mospsa
