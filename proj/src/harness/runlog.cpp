#include "ride/harness/runlog.hpp"

#include <fstream>
#include <sstream>

#include "ride/core/error.hpp"

namespace ride::harness {

RunLog::RunLog(std::ostream* out) : out_(out) {
  if (out_) *out_ << kRunLogHeader << "\n";
}

RunLogRow RunLog::append(uint64_t frames, double episode_return, double mean_ri) {
  std::lock_guard<std::mutex> lock(mu_);
  episodes_++;
  window_.push_back(episode_return);
  window_sum_ += episode_return;
  if (window_.size() > 100) {
    window_sum_ -= window_.front();
    window_.pop_front();
  }
  rolling_ = window_sum_ / static_cast<double>(window_.size());

  RunLogRow row{frames, episodes_, episode_return, rolling_, mean_ri};
  if (out_) {
    std::ostringstream line;
    line.precision(10);
    line << row.frames << ',' << row.episodes << ',' << row.episode_return << ','
         << row.rolling_mean_return_100 << ',' << row.mean_intrinsic_reward;
    *out_ << line.str() << "\n";
  }
  return row;
}

uint64_t RunLog::episodes() const {
  std::lock_guard<std::mutex> lock(mu_);
  return episodes_;
}

double RunLog::rolling() const {
  std::lock_guard<std::mutex> lock(mu_);
  return rolling_;
}

std::vector<RunLogRow> read_runlog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read run log: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kRunLogHeader)
    throw IoError("not a run log (bad header): " + path);
  std::vector<RunLogRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    RunLogRow r;
    std::istringstream ss(line);
    char comma;
    ss >> r.frames >> comma >> r.episodes >> comma >> r.episode_return >> comma >>
        r.rolling_mean_return_100 >> comma >> r.mean_intrinsic_reward;
    if (!ss) throw IoError("bad run log line in " + path + ": " + line);
    rows.push_back(r);
  }
  return rows;
}

uint64_t frames_to_return(const std::vector<RunLogRow>& rows, double threshold) {
  for (const auto& r : rows)
    if (r.episodes >= 100 && r.rolling_mean_return_100 >= threshold) return r.frames;
  return 0;
}

double max_rolling_return(const std::vector<RunLogRow>& rows) {
  double best = 0;
  for (const auto& r : rows)
    if (r.episodes >= 100) best = std::max(best, r.rolling_mean_return_100);
  return best;
}

}  // namespace ride::harness
