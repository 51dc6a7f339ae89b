#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ride/agent/learner.hpp"
#include "ride/grid/types.hpp"
#include "ride/intrinsic/rewards.hpp"

namespace ride::harness {

// One training run, fully described. Serializes to a flat key=value file;
// round-trips identically. Negative omega_ir / entropy_coef mean "use the
// tuned per-task default".
struct ExperimentConfig {
  std::string task = "multiroom-n7-s4";
  std::string method = "ride";
  uint64_t seed = 1;
  uint64_t total_frames = 2'000'000;
  int batch_size = 32;
  int unroll_length = 100;
  int num_workers = 2;   // async mode only
  bool sync = true;
  int64_t singleton_seed = -1;  // < 0: procedurally generated every episode
  bool no_extrinsic = false;
  double omega_ir = -1.0;
  double entropy_coef = -1.0;
  double learning_rate = 1e-4;
  double rms_momentum = 0.0;
  double rms_epsilon = 0.01;
  double rms_decay = 0.99;
  double clip_grad_norm = 40.0;
  int64_t anneal_frames = -1;  // < 0: anneal over total_frames
  double gamma = 0.99;
  double rho_bar = 1.0;
  double c_bar = 1.0;
  double baseline_coef = 0.5;
  double omega_pi = 1.0;
  double omega_fw = 10.0;
  double omega_inv = 0.1;
  int view_size = 7;
  int eval_episodes = 100;
  uint64_t checkpoint_interval = 0;  // frames between periodic checkpoints, 0 = final only
  double stop_return = 0.0;          // stop early once the rolling return reaches this, 0 = off
  bool trace = false;                // write per-step trace CSVs during training

  grid::TaskSpec task_spec() const;
  intrinsic::Method method_enum() const { return intrinsic::method_from_string(method); }

  // omega_ir / entropy_coef with the tuned per-task defaults filled in.
  intrinsic::RewardConfig reward_config() const;
  nn::OptimConfig optim_config() const;
  agent::LossWeights loss_weights() const;

  std::string serialize() const;
  static ExperimentConfig deserialize(const std::string& text);
  static ExperimentConfig load_file(const std::string& path);
  void save_file(const std::string& path) const;

  // Human-readable field-by-field diff, empty when equal.
  std::string diff(const ExperimentConfig& other) const;

  bool operator==(const ExperimentConfig&) const = default;
};

// The tuned intrinsic-reward / entropy coefficients per task class.
void default_coefficients(const grid::TaskSpec& task, intrinsic::Method method, double& omega_ir,
                          double& entropy_coef);

}  // namespace ride::harness
