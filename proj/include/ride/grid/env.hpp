#pragma once

#include <string>
#include <vector>

#include "ride/core/rng.hpp"
#include "ride/grid/types.hpp"

namespace ride::grid {

struct RoomRect {
  int x = 0, y = 0, w = 0, h = 0;
  bool contains(int px, int py) const { return px >= x && px < x + w && py >= y && py < y + h; }
};

// Full environment state. A value type: copying it copies the episode,
// including the episode rng, so two copies evolve identically under the same
// actions.
struct EnvState {
  int width = 0;
  int height = 0;
  std::vector<Cell> cells;
  AgentPose agent;
  int step_count = 0;
  int max_steps = 0;
  Rng rng;  // in-episode stochasticity (noisy TV, moving obstacles)

  std::vector<RoomRect> rooms;              // generation order; room 0 holds the start
  std::vector<std::pair<int, int>> obstacles;  // dynamicobstacles ball positions
  int tv_x = -1, tv_y = -1;                 // noisy-TV ball position, -1 when absent
  Item target;                              // pickup target (KeyCorridor/ObstructedMaze)
  Color wall_color = Color::grey;
  Color goal_color = Color::green;

  Cell& at(int x, int y) { return cells[static_cast<size_t>(y) * width + x]; }
  const Cell& at(int x, int y) const { return cells[static_cast<size_t>(y) * width + x]; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  bool is_tv(int x, int y) const { return x == tv_x && y == tv_y; }
};

// What a step did, recorded for traces and per-action reward analyses.
enum class StepEvent : uint8_t {
  noop = 0,
  turned,
  moved,
  bumped,
  picked_key,
  picked_ball,
  picked_box,
  dropped_key,
  dropped_ball,
  dropped_box,
  opened_door,
  unlocked_door,
  closed_door,
  opened_box,
  tv_trigger,
  reached_goal,
  collided,
  timeout,
};

const char* to_string(StepEvent e);
StepEvent step_event_from_string(const std::string& s);

// Time-discounted success reward, 1 - 0.9 * step / max_steps.
inline float success_reward(int step, int max_steps) {
  return 1.0f - 0.9f * (static_cast<float>(step) / static_cast<float>(max_steps));
}

struct StepResult {
  float reward = 0.0f;
  bool done = false;
  StepEvent event = StepEvent::noop;
};

class Env {
 public:
  explicit Env(TaskSpec spec);

  // Generates a fresh episode. The layout (and the whole initial state) is a
  // pure function of `seed`, or of the task's singleton seed when set. Only
  // layouts certified reachable by the scripted solver are returned.
  const Observation& reset(uint64_t seed);

  StepResult step(Action action);

  const Observation& obs() const { return obs_; }
  uint64_t obs_hash() const { return hash_observation(obs_); }
  const EnvState& state() const { return state_; }
  const TaskSpec& task() const { return spec_; }
  bool terminated() const { return terminated_; }

  // 1-based index of the room containing (x, y); 0 when outside all rooms.
  int room_of(int x, int y) const;

  // Text map with a legend; the debugging dump format.
  std::string render() const;

  // Overrides the task's step limit on subsequent resets (0 = task default).
  void set_step_budget(int steps) { step_budget_ = steps; }

  // Installs a hand-built state; for tests.
  static Env from_state(TaskSpec spec, EnvState state);

 private:
  void encode();
  void move_obstacles();

  TaskSpec spec_;
  EnvState state_;
  Observation obs_;
  bool terminated_ = true;
  int step_budget_ = 0;
};

// Egocentric view with occlusion; exposed for tests.
Observation encode_observation(const EnvState& state, int view_size);

// Builds one candidate layout (no reachability check). Exposed for tests.
EnvState build_layout(const TaskSpec& spec, Rng& rng);

// Scripted solver: plans and executes a solution on a copy of the env.
// Returns the number of steps on success. Used as the reachability certifier.
std::optional<int> scripted_solve(const Env& env);

}  // namespace ride::grid
