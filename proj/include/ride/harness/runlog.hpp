#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

namespace ride::harness {

struct RunLogRow {
  uint64_t frames = 0;
  uint64_t episodes = 0;
  double episode_return = 0;
  double rolling_mean_return_100 = 0;
  double mean_intrinsic_reward = 0;
};

inline constexpr const char* kRunLogHeader =
    "frames,episodes,episode_return,rolling_mean_return_100,mean_intrinsic_reward";

// Append-only episode log with the rolling mean over the past 100 episodes.
// Thread-safe: async workers all report here.
class RunLog {
 public:
  explicit RunLog(std::ostream* out = nullptr);

  RunLogRow append(uint64_t frames, double episode_return, double mean_ri);

  uint64_t episodes() const;
  double rolling() const;

 private:
  mutable std::mutex mu_;
  std::ostream* out_;
  std::deque<double> window_;
  double window_sum_ = 0;
  uint64_t episodes_ = 0;
  double rolling_ = 0;
};

std::vector<RunLogRow> read_runlog(const std::string& path);

// First frame count at which the rolling mean (with >= 100 episodes behind
// it) reaches `threshold`; 0 if never.
uint64_t frames_to_return(const std::vector<RunLogRow>& rows, double threshold);

// Largest rolling mean seen at >= 100 episodes.
double max_rolling_return(const std::vector<RunLogRow>& rows);

}  // namespace ride::harness
