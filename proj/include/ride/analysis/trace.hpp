#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ride/grid/env.hpp"

namespace ride::analysis {

// One environment step, as written to trace CSVs. Pose/room describe the
// state after the action; ri/re are the raw intrinsic and extrinsic rewards.
struct TraceRecord {
  uint64_t episode = 0;
  int step = 0;
  int x = 0, y = 0;
  int dir = 0;
  int action = 0;
  grid::StepEvent event = grid::StepEvent::noop;
  int room = 0;
  double ri = 0;
  double re = 0;
  uint64_t obs_hash = 0;
};

inline constexpr const char* kTraceHeader =
    "episode,step,x,y,dir,action,event,room,ri,re,obs_hash";

void write_trace_header(std::ostream& out);
void write_trace_record(std::ostream& out, const TraceRecord& r);

// Reads one trace CSV (header required).
std::vector<TraceRecord> read_trace_file(const std::string& path);

// Reads and concatenates every *.csv under a directory, sorted by filename.
std::vector<TraceRecord> read_trace_dir(const std::string& dir);

}  // namespace ride::analysis
