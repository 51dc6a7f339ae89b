#include "ride/analysis/reports.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace ride::analysis {

using grid::Action;
using grid::StepEvent;

std::vector<ActionGroup> door_groups() {
  return {
      {"open_door",
       [](const TraceRecord& r) {
         return r.event == StepEvent::opened_door || r.event == StepEvent::unlocked_door;
       }},
      {"turn",
       [](const TraceRecord& r) {
         return r.action == static_cast<int>(Action::turn_left) ||
                r.action == static_cast<int>(Action::turn_right);
       }},
      {"forward",
       [](const TraceRecord& r) { return r.action == static_cast<int>(Action::forward); }},
  };
}

std::vector<ActionGroup> object_groups() {
  auto in_first_three = [](const TraceRecord& r) {
    return r.event == StepEvent::opened_door || r.event == StepEvent::unlocked_door ||
           r.event == StepEvent::picked_ball || r.event == StepEvent::picked_key ||
           r.event == StepEvent::dropped_key;
  };
  return {
      {"open_door",
       [](const TraceRecord& r) {
         return r.event == StepEvent::opened_door || r.event == StepEvent::unlocked_door;
       }},
      {"pick_ball", [](const TraceRecord& r) { return r.event == StepEvent::picked_ball; }},
      {"pick_key", [](const TraceRecord& r) { return r.event == StepEvent::picked_key; }},
      {"drop_key", [](const TraceRecord& r) { return r.event == StepEvent::dropped_key; }},
      {"other", [in_first_three](const TraceRecord& r) { return !in_first_three(r); }},
  };
}

std::vector<ActionGroup> groups_by_name(const std::string& name) {
  if (name == "doors") return door_groups();
  if (name == "objects") return object_groups();
  throw ConfigError("unknown action grouping '" + name + "' (use doors|objects)");
}

std::vector<GroupStats> per_action_reward_table(const std::vector<TraceRecord>& traces,
                                                const std::vector<ActionGroup>& groups) {
  std::vector<GroupStats> out;
  for (const auto& g : groups) {
    GroupStats s;
    s.group = g.name;
    std::vector<double> xs;
    for (const auto& r : traces)
      if (g.match(r)) xs.push_back(r.ri);
    s.count = xs.size();
    if (!xs.empty()) {
      double sum = 0;
      for (double x : xs) sum += x;
      const double mean = sum / xs.size();
      double sq = 0;
      for (double x : xs) sq += (x - mean) * (x - mean);
      s.mean = mean;
      s.stddev = std::sqrt(sq / xs.size());
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<GroupStats> per_action_reward_table_streaming(const std::vector<TraceRecord>& traces,
                                                          const std::vector<ActionGroup>& groups) {
  struct Welford {
    size_t n = 0;
    double mean = 0, m2 = 0;
    void add(double x) {
      n++;
      const double d = x - mean;
      mean += d / n;
      m2 += d * (x - mean);
    }
  };
  std::vector<Welford> acc(groups.size());
  for (const auto& r : traces)
    for (size_t gi = 0; gi < groups.size(); gi++)
      if (groups[gi].match(r)) acc[gi].add(r.ri);
  std::vector<GroupStats> out;
  for (size_t gi = 0; gi < groups.size(); gi++) {
    GroupStats s;
    s.group = groups[gi].name;
    s.count = acc[gi].n;
    if (acc[gi].n > 0) {
      s.mean = acc[gi].mean;
      s.stddev = std::sqrt(acc[gi].m2 / acc[gi].n);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_group_table(const std::vector<GroupStats>& stats) {
  std::ostringstream out;
  out << "group,count,mean,std\n";
  out.precision(8);
  for (const auto& s : stats) {
    out << s.group << ',' << s.count << ',';
    if (s.mean) out << *s.mean;
    out << ',';
    if (s.stddev) out << *s.stddev;
    out << '\n';
  }
  return out.str();
}

double HeatGrid::total() const {
  double s = 0;
  for (double v : values) s += v;
  return s;
}

double HeatGrid::max_value() const {
  double m = 0;
  for (double v : values) m = std::max(m, v);
  return m;
}

namespace {

HeatGrid make_grid(const std::vector<TraceRecord>& traces, int width, int height) {
  HeatGrid g;
  if (width > 0 && height > 0) {
    g.width = width;
    g.height = height;
    for (const auto& r : traces)
      if (r.x < 0 || r.x >= width || r.y < 0 || r.y >= height)
        throw ContractViolation("trace position outside the layout dimensions");
  } else {
    for (const auto& r : traces) {
      g.width = std::max(g.width, r.x + 1);
      g.height = std::max(g.height, r.y + 1);
    }
  }
  g.values.assign(static_cast<size_t>(g.width) * g.height, 0.0);
  return g;
}

}  // namespace

HeatGrid state_visitation_heatmap(const std::vector<TraceRecord>& traces, int width, int height) {
  HeatGrid g = make_grid(traces, width, height);
  for (const auto& r : traces) g.at(r.x, r.y) += 1.0;
  return g;
}

std::vector<std::pair<std::string, HeatGrid>> intrinsic_heatmap(
    const std::vector<TraceRecord>& traces, const std::vector<ActionGroup>& groups, int width,
    int height) {
  std::vector<std::pair<std::string, HeatGrid>> out;
  for (const auto& grp : groups) {
    HeatGrid sum = make_grid(traces, width, height);
    HeatGrid count = sum;
    for (const auto& r : traces) {
      if (!grp.match(r)) continue;
      sum.at(r.x, r.y) += r.ri;
      count.at(r.x, r.y) += 1.0;
    }
    for (size_t i = 0; i < sum.values.size(); i++)
      if (count.values[i] > 0) sum.values[i] /= count.values[i];
    out.emplace_back(grp.name, std::move(sum));
  }
  return out;
}

DistinctStates distinct_states_per_episode(const std::vector<TraceRecord>& traces, int window) {
  std::map<uint64_t, std::unordered_set<uint64_t>> per_episode;
  for (const auto& r : traces) per_episode[r.episode].insert(r.obs_hash);
  DistinctStates d;
  double acc = 0;
  std::deque<size_t> w;
  for (const auto& [ep, hashes] : per_episode) {
    d.episodes.push_back(ep);
    d.distinct.push_back(hashes.size());
    w.push_back(hashes.size());
    acc += static_cast<double>(hashes.size());
    if (static_cast<int>(w.size()) > window) {
      acc -= static_cast<double>(w.front());
      w.pop_front();
    }
    d.rolling.push_back(acc / static_cast<double>(w.size()));
  }
  return d;
}

std::vector<int> max_room_per_episode(const std::vector<TraceRecord>& traces) {
  std::map<uint64_t, int> best;
  for (const auto& r : traces) {
    auto [it, inserted] = best.try_emplace(r.episode, r.room);
    if (!inserted) it->second = std::max(it->second, r.room);
  }
  std::vector<int> out;
  out.reserve(best.size());
  for (const auto& [ep, room] : best) out.push_back(room);
  return out;
}

double median(std::vector<double> xs) {
  RIDE_REQUIRE(!xs.empty(), "median of an empty set");
  std::sort(xs.begin(), xs.end());
  const size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

DecayCurve reward_decay_curve(const std::vector<harness::RunLogRow>& rows, int window) {
  DecayCurve d;
  double acc = 0;
  std::deque<double> w;
  for (const auto& r : rows) {
    w.push_back(r.mean_intrinsic_reward);
    acc += r.mean_intrinsic_reward;
    if (static_cast<int>(w.size()) > window) {
      acc -= w.front();
      w.pop_front();
    }
    d.frames.push_back(r.frames);
    d.mean_ri.push_back(acc / static_cast<double>(w.size()));
  }
  return d;
}

void write_heatmap_csv(const HeatGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(10);
  for (int y = 0; y < grid.height; y++) {
    for (int x = 0; x < grid.width; x++) {
      if (x) out << ',';
      out << grid.at(x, y);
    }
    out << '\n';
  }
}

void write_heatmap_pgm(const HeatGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  const double mx = grid.max_value();
  out << "P2\n" << grid.width << ' ' << grid.height << "\n255\n";
  for (int y = 0; y < grid.height; y++) {
    for (int x = 0; x < grid.width; x++) {
      const int v = mx > 0 ? static_cast<int>(std::lround(255.0 * grid.at(x, y) / mx)) : 0;
      out << v << (x + 1 < grid.width ? ' ' : '\n');
    }
  }
}

void write_group_table_csv(const std::vector<GroupStats>& stats, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << format_group_table(stats);
}

void write_distinct_csv(const DistinctStates& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "episode,distinct_states,rolling_mean\n";
  out.precision(10);
  for (size_t i = 0; i < d.episodes.size(); i++)
    out << d.episodes[i] << ',' << d.distinct[i] << ',' << d.rolling[i] << '\n';
}

void write_decay_csv(const DecayCurve& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "frames,mean_intrinsic_reward\n";
  out.precision(10);
  for (size_t i = 0; i < d.frames.size(); i++) out << d.frames[i] << ',' << d.mean_ri[i] << '\n';
}

std::pair<int, int> layout_dimensions(const std::string& layout_text) {
  std::istringstream in(layout_text);
  std::string line;
  int width = 0, height = 0;
  while (std::getline(in, line)) {
    if (line.rfind("legend:", 0) == 0) break;
    if (line.empty()) break;
    width = std::max(width, static_cast<int>(line.size()));
    height++;
  }
  if (width == 0 || height == 0) throw IoError("empty layout map");
  return {width, height};
}

}  // namespace ride::analysis
