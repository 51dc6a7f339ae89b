#pragma once

#include <functional>
#include <map>
#include <optional>

#include "ride/analysis/trace.hpp"
#include "ride/harness/runlog.hpp"

namespace ride::analysis {

// A named action group; a step belongs to it if its (action, event) pair is
// accepted. Tables and heatmaps aggregate intrinsic reward per group.
struct ActionGroup {
  std::string name;
  std::function<bool(const TraceRecord&)> match;
};

// Groups for door-centric tasks: successful door opens, turns, forward moves.
std::vector<ActionGroup> door_groups();
// Groups for object-heavy tasks: open door / pick ball / pick key / drop key
// / everything else.
std::vector<ActionGroup> object_groups();
std::vector<ActionGroup> groups_by_name(const std::string& name);

struct GroupStats {
  std::string group;
  size_t count = 0;
  std::optional<double> mean;  // absent when the group never occurs
  std::optional<double> stddev;
};

// Mean/std of r_i per action group over all matching steps.
std::vector<GroupStats> per_action_reward_table(const std::vector<TraceRecord>& traces,
                                                const std::vector<ActionGroup>& groups);

// One-pass Welford variant; must agree with the batch implementation.
std::vector<GroupStats> per_action_reward_table_streaming(const std::vector<TraceRecord>& traces,
                                                          const std::vector<ActionGroup>& groups);

std::string format_group_table(const std::vector<GroupStats>& stats);

struct HeatGrid {
  int width = 0, height = 0;
  std::vector<double> values;  // row-major [y][x]

  double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
  double total() const;
  double max_value() const;
};

// Per-tile visit counts over all trace steps. Grid dimensions are taken
// from `width`/`height` when positive, otherwise inferred from the records.
// Positions outside explicit dimensions are fatal.
HeatGrid state_visitation_heatmap(const std::vector<TraceRecord>& traces, int width = 0,
                                  int height = 0);

// Per-group grids of mean intrinsic reward at the agent's position.
std::vector<std::pair<std::string, HeatGrid>> intrinsic_heatmap(
    const std::vector<TraceRecord>& traces, const std::vector<ActionGroup>& groups, int width = 0,
    int height = 0);

// Per-episode count of distinct observation hashes, episode-ordered, plus a
// rolling mean over `window` episodes.
struct DistinctStates {
  std::vector<uint64_t> episodes;
  std::vector<size_t> distinct;
  std::vector<double> rolling;
};
DistinctStates distinct_states_per_episode(const std::vector<TraceRecord>& traces,
                                           int window = 100);

// Per-episode maximum room index, and its median across episodes.
std::vector<int> max_room_per_episode(const std::vector<TraceRecord>& traces);
double median(std::vector<double> xs);

// Smoothed mean-intrinsic-reward series from a run log (moving average over
// `window` rows).
struct DecayCurve {
  std::vector<uint64_t> frames;
  std::vector<double> mean_ri;
};
DecayCurve reward_decay_curve(const std::vector<harness::RunLogRow>& rows, int window = 100);

// Writers: CSV and max-normalized grayscale portable graymap.
void write_heatmap_csv(const HeatGrid& grid, const std::string& path);
void write_heatmap_pgm(const HeatGrid& grid, const std::string& path);
void write_group_table_csv(const std::vector<GroupStats>& stats, const std::string& path);
void write_distinct_csv(const DistinctStates& d, const std::string& path);
void write_decay_csv(const DecayCurve& d, const std::string& path);

// Parses the text-map dump format to recover grid dimensions.
std::pair<int, int> layout_dimensions(const std::string& layout_text);

}  // namespace ride::analysis
