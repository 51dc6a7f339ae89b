#pragma once

#include <atomic>
#include <functional>
#include <memory>

#include "ride/agent/model.hpp"
#include "ride/agent/rollout.hpp"
#include "ride/analysis/trace.hpp"
#include "ride/grid/env.hpp"
#include "ride/intrinsic/counts.hpp"

namespace ride::agent {

struct EpisodeResult {
  uint64_t index = 0;       // global episode counter of this worker
  uint64_t frames_at_end = 0;
  double return_ext = 0;    // undiscounted extrinsic return
  double mean_ri = 0;       // mean raw intrinsic reward per step
  int length = 0;
  int max_room = 0;         // deepest room reached (1-based)
};

using EpisodeSink = std::function<void(const EpisodeResult&)>;
using TraceSink = std::function<void(const analysis::TraceRecord&)>;

// Runs a batch of environments in lockstep against a parameter snapshot and
// produces learner batches. Owns the episodic count tables; intrinsic
// rewards are computed here, at rollout time, except the count bonus which
// needs the learner-owned global table.
class RolloutWorker {
 public:
  RolloutWorker(const grid::TaskSpec& task, const intrinsic::RewardConfig& reward, int n_envs,
                int unroll, uint64_t run_seed, int env_index_base, int step_budget = 0);

  // Collects one batch of n_envs unrolls using `model` for both acting and
  // intrinsic rewards. Count-method batches leave reward_int zeroed.
  void collect(const AgentModel& model, RolloutBatch& batch);

  void set_episode_sink(EpisodeSink sink) { episode_sink_ = std::move(sink); }
  void set_trace_sink(TraceSink sink) { trace_sink_ = std::move(sink); }

  // Shared step counter for exact frame accounting across workers, plus a
  // base offset for resumed runs.
  void set_frame_counter(std::atomic<uint64_t>* counter, uint64_t base = 0) {
    shared_frames_ = counter;
    frame_base_ = base;
  }

  uint64_t frames() const { return frames_; }
  uint64_t episodes() const { return episodes_; }

 private:
  void reset_env(int b, const AgentModel& model);

  grid::TaskSpec task_;
  intrinsic::RewardConfig reward_;
  int n_envs_, unroll_;
  uint64_t run_seed_;
  int env_base_;

  std::vector<grid::Env> envs_;
  std::vector<intrinsic::CountStore> counts_;
  std::vector<uint64_t> env_episode_;  // per-env episode counter
  std::vector<float> h_, c_;           // B x hidden recurrent state
  std::vector<float> phi_;             // B x E current-state embeddings
  std::vector<EpisodeResult> episode_acc_;
  Rng action_rng_;
  uint64_t frames_ = 0;
  uint64_t episodes_ = 0;
  bool first_batch_ = true;
  std::atomic<uint64_t>* shared_frames_ = nullptr;
  uint64_t frame_base_ = 0;

  EpisodeSink episode_sink_;
  TraceSink trace_sink_;
};

}  // namespace ride::agent
