#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ride/agent/worker.hpp"
#include "ride/harness/config.hpp"
#include "ride/harness/runlog.hpp"

namespace ride::harness {

struct ProgressInfo {
  uint64_t frames = 0;
  uint64_t episodes = 0;
  double rolling_return = 0;
  double mean_intrinsic = 0;
};

using ProgressFn = std::function<void(const ProgressInfo&)>;

struct TrainResult {
  uint64_t frames = 0;
  uint64_t episodes = 0;
  double final_rolling_return = 0;
  std::string checkpoint_dir;  // final checkpoint
  std::string runlog_path;
};

// Runs one seed to completion (total_frames, or stop_return if configured).
// Writes out_dir/{config.cfg, runlog.csv, learner.csv, checkpoints/...} and
// traces/ when enabled. `resume_from` restores parameters, optimizer state
// and the frame counter from a checkpoint whose config must match.
TrainResult run_training(const ExperimentConfig& cfg, const std::string& out_dir,
                         ProgressFn progress = {}, const std::string& resume_from = {});

// Checkpoint directory I/O.
struct Checkpoint {
  ExperimentConfig config;
  agent::AgentModel model;
  intrinsic::CountStore counts;  // global table (count method)
  uint64_t frames = 0;
};

void save_checkpoint(const agent::AgentModel& model, const ExperimentConfig& cfg, uint64_t frames,
                     const intrinsic::CountStore& counts, const std::string& dir);
Checkpoint load_checkpoint(const std::string& dir);

struct EvalOptions {
  int episodes = 100;
  uint64_t seed = 10'000;
  int step_budget = 0;          // 0 = task default
  std::string color_mode;       // "", "train" or "held-out" (colorgen tasks)
  std::string traces_out;       // directory for trace CSVs, empty = none
};

struct EvalResult {
  double mean_return = 0;
  double std_return = 0;  // population standard deviation
  int episodes = 0;
};

// Policy evaluation by sampling from pi on freshly generated instances.
// A null model plays uniformly random actions.
EvalResult evaluate_model(const agent::AgentModel* model, const intrinsic::RewardConfig& reward,
                          grid::TaskSpec spec, const EvalOptions& opts,
                          agent::TraceSink trace = {});

EvalResult evaluate_checkpoint(const std::string& checkpoint_dir, const std::string& task_override,
                               const EvalOptions& opts);

// Default output root: $RIDE_LOG_DIR or ./runs.
std::string log_root();

}  // namespace ride::harness
