#pragma once

#include <cstdint>
#include <vector>

#include "ride/core/error.hpp"

namespace ride::agent {

// One learner batch: B unrolls of T transitions, time-major storage.
// obs has T+1 rows per env; row T is the bootstrap observation. done[t]
// marks that transition t ended an episode (obs t+1 starts a fresh one).
struct RolloutBatch {
  int steps = 0;
  int batch = 0;
  int view = 7;
  int n_actions = 7;

  std::vector<int8_t> obs;             // (T+1)*B x view*view*3
  std::vector<int> actions;            // T*B
  std::vector<float> reward_ext;       // T*B
  std::vector<float> reward_int;       // T*B, raw intrinsic bonus
  std::vector<float> reward;           // T*B, combined training reward
  std::vector<uint8_t> done;           // T*B
  std::vector<float> behavior_logits;  // T*B x n_actions
  std::vector<uint64_t> obs_hash;      // T*B, hash of the landed-in state
  std::vector<float> init_h, init_c;   // B x hidden

  void allocate(int T, int B, int view_size, int hidden, int actions_n) {
    steps = T;
    batch = B;
    view = view_size;
    n_actions = actions_n;
    const size_t cells = static_cast<size_t>(view) * view * 3;
    obs.assign(static_cast<size_t>(T + 1) * B * cells, 0);
    actions.assign(static_cast<size_t>(T) * B, 0);
    reward_ext.assign(static_cast<size_t>(T) * B, 0.f);
    reward_int.assign(static_cast<size_t>(T) * B, 0.f);
    reward.assign(static_cast<size_t>(T) * B, 0.f);
    done.assign(static_cast<size_t>(T) * B, 0);
    behavior_logits.assign(static_cast<size_t>(T) * B * actions_n, 0.f);
    obs_hash.assign(static_cast<size_t>(T) * B, 0);
    init_h.assign(static_cast<size_t>(B) * hidden, 0.f);
    init_c.assign(static_cast<size_t>(B) * hidden, 0.f);
  }

  size_t obs_cells() const { return static_cast<size_t>(view) * view * 3; }
  int8_t* obs_row(int t, int b) { return obs.data() + (static_cast<size_t>(t) * batch + b) * obs_cells(); }
  const int8_t* obs_row(int t, int b) const {
    return obs.data() + (static_cast<size_t>(t) * batch + b) * obs_cells();
  }
};

}  // namespace ride::agent
