#include "ride/analysis/trace.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace ride::analysis {

void write_trace_header(std::ostream& out) { out << kTraceHeader << "\n"; }

void write_trace_record(std::ostream& out, const TraceRecord& r) {
  std::ostringstream line;
  line.precision(10);
  line << r.episode << ',' << r.step << ',' << r.x << ',' << r.y << ',' << r.dir << ',' << r.action
       << ',' << grid::to_string(r.event) << ',' << r.room << ',' << r.ri << ',' << r.re << ','
       << r.obs_hash;
  out << line.str() << "\n";
}

std::vector<TraceRecord> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read trace file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader)
    throw IoError("not a trace file (bad header): " + path);
  std::vector<TraceRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, ',')) parts.push_back(part);
    if (parts.size() != 11) throw IoError("bad trace line in " + path + ": " + line);
    TraceRecord r;
    r.episode = std::stoull(parts[0]);
    r.step = std::stoi(parts[1]);
    r.x = std::stoi(parts[2]);
    r.y = std::stoi(parts[3]);
    r.dir = std::stoi(parts[4]);
    r.action = std::stoi(parts[5]);
    r.event = grid::step_event_from_string(parts[6]);
    r.room = std::stoi(parts[7]);
    r.ri = std::stod(parts[8]);
    r.re = std::stod(parts[9]);
    r.obs_hash = std::stoull(parts[10]);
    out.push_back(r);
  }
  return out;
}

std::vector<TraceRecord> read_trace_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  std::vector<TraceRecord> all;
  uint64_t episode_base = 0;
  for (const auto& f : files) {
    auto rows = read_trace_file(f);
    uint64_t max_ep = 0;
    for (auto& r : rows) {
      max_ep = std::max(max_ep, r.episode);
      r.episode += episode_base;  // keep episode ids unique across files
      all.push_back(r);
    }
    if (!rows.empty()) episode_base += max_ep + 1;
  }
  return all;
}

}  // namespace ride::analysis
