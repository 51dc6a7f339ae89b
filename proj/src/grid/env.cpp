#include "ride/grid/env.hpp"

#include <algorithm>
#include <sstream>

namespace ride::grid {

namespace {

int8_t obs_code(ObjectKind k) {
  switch (k) {
    case ObjectKind::none: return kObsEmpty;
    case ObjectKind::wall: return kObsWall;
    case ObjectKind::door: return kObsDoor;
    case ObjectKind::key: return kObsKey;
    case ObjectKind::ball: return kObsBall;
    case ObjectKind::box: return kObsBox;
    case ObjectKind::goal: return kObsGoal;
  }
  return kObsUnseen;
}

}  // namespace

const char* to_string(StepEvent e) {
  switch (e) {
    case StepEvent::noop: return "noop";
    case StepEvent::turned: return "turned";
    case StepEvent::moved: return "moved";
    case StepEvent::bumped: return "bumped";
    case StepEvent::picked_key: return "picked_key";
    case StepEvent::picked_ball: return "picked_ball";
    case StepEvent::picked_box: return "picked_box";
    case StepEvent::dropped_key: return "dropped_key";
    case StepEvent::dropped_ball: return "dropped_ball";
    case StepEvent::dropped_box: return "dropped_box";
    case StepEvent::opened_door: return "opened_door";
    case StepEvent::unlocked_door: return "unlocked_door";
    case StepEvent::closed_door: return "closed_door";
    case StepEvent::opened_box: return "opened_box";
    case StepEvent::tv_trigger: return "tv_trigger";
    case StepEvent::reached_goal: return "reached_goal";
    case StepEvent::collided: return "collided";
    case StepEvent::timeout: return "timeout";
  }
  return "?";
}

StepEvent step_event_from_string(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(StepEvent::timeout); i++) {
    auto e = static_cast<StepEvent>(i);
    if (s == to_string(e)) return e;
  }
  throw ConfigError("unknown step event '" + s + "'");
}

Env::Env(TaskSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

Env Env::from_state(TaskSpec spec, EnvState state) {
  Env env(std::move(spec));
  env.state_ = std::move(state);
  env.terminated_ = false;
  env.encode();
  return env;
}

const Observation& Env::reset(uint64_t seed) {
  const uint64_t layout_seed = spec_.singleton_seed ? *spec_.singleton_seed : seed;
  Rng rng(mix_seed(layout_seed, 0x9d1cull));
  for (int attempt = 0;; attempt++) {
    if (attempt >= 1000) throw ConfigError("could not generate a solvable '" + spec_.name() + "' layout");
    state_ = build_layout(spec_, rng);
    if (step_budget_ > 0) state_.max_steps = step_budget_;
    terminated_ = false;
    if (spec_.family == TaskFamily::dynamicobstacles) break;  // no static certificate
    if (scripted_solve(*this)) break;
  }
  encode();
  return obs_;
}

StepResult Env::step(Action action) {
  RIDE_REQUIRE(!terminated_, "step() on a terminated episode");
  StepResult res;
  EnvState& st = state_;
  AgentPose& ag = st.agent;
  st.step_count++;

  const int fx = ag.x + dx(ag.dir);
  const int fy = ag.y + dy(ag.dir);
  const bool front_in = st.in_bounds(fx, fy);

  // DynamicObstacles: walking into a moving ball ends the episode.
  const bool front_obstacle =
      front_in && std::find(st.obstacles.begin(), st.obstacles.end(), std::make_pair(fx, fy)) !=
                      st.obstacles.end();

  switch (action) {
    case Action::turn_left:
      ag.dir = rotate_left(ag.dir);
      res.event = StepEvent::turned;
      break;
    case Action::turn_right:
      ag.dir = rotate_right(ag.dir);
      res.event = StepEvent::turned;
      break;
    case Action::forward: {
      if (front_obstacle) {
        res.event = StepEvent::collided;
        res.reward = -1.0f;
        res.done = true;
        break;
      }
      if (front_in && st.at(fx, fy).is_traversable()) {
        ag.x = fx;
        ag.y = fy;
        res.event = StepEvent::moved;
        if (st.at(fx, fy).kind == ObjectKind::goal) {
          res.event = StepEvent::reached_goal;
          res.reward = success_reward(st.step_count, st.max_steps);
          res.done = true;
        }
      } else {
        res.event = StepEvent::bumped;
      }
      break;
    }
    case Action::pickup: {
      if (front_in && !ag.carrying && st.at(fx, fy).is_pickable() && !st.is_tv(fx, fy) &&
          !front_obstacle) {
        Cell& c = st.at(fx, fy);
        ag.carrying = Item{c.kind, c.color};
        ag.carried_contents = c.contents;
        res.event = c.kind == ObjectKind::key   ? StepEvent::picked_key
                    : c.kind == ObjectKind::ball ? StepEvent::picked_ball
                                                 : StepEvent::picked_box;
        const Item picked = *ag.carrying;
        c = Cell::empty();
        // KeyCorridor / ObstructedMaze: picking up the target ball wins.
        if (st.target.kind != ObjectKind::none && picked == st.target) {
          res.reward = success_reward(st.step_count, st.max_steps);
          res.done = true;
        }
      } else {
        res.event = StepEvent::noop;
      }
      break;
    }
    case Action::drop: {
      if (front_in && ag.carrying && st.at(fx, fy).kind == ObjectKind::none &&
          !st.is_tv(fx, fy) && !front_obstacle) {
        st.at(fx, fy) = Cell::object(ag.carrying->kind, ag.carrying->color);
        st.at(fx, fy).contents = ag.carried_contents;
        res.event = ag.carrying->kind == ObjectKind::key   ? StepEvent::dropped_key
                    : ag.carrying->kind == ObjectKind::ball ? StepEvent::dropped_ball
                                                            : StepEvent::dropped_box;
        ag.carrying.reset();
        ag.carried_contents = Item{};
      } else {
        res.event = StepEvent::noop;
      }
      break;
    }
    case Action::toggle: {
      res.event = StepEvent::noop;
      if (front_in) {
        Cell& c = st.at(fx, fy);
        if (c.kind == ObjectKind::door) {
          if (c.door_state == DoorState::locked) {
            if (ag.carrying && ag.carrying->kind == ObjectKind::key && ag.carrying->color == c.color) {
              c.door_state = DoorState::open;
              res.event = StepEvent::unlocked_door;
            }
          } else if (c.door_state == DoorState::closed) {
            c.door_state = DoorState::open;
            res.event = StepEvent::opened_door;
          } else {
            c.door_state = DoorState::closed;
            res.event = StepEvent::closed_door;
          }
        } else if (c.kind == ObjectKind::box) {
          const Item inside = c.contents;
          c = inside.kind == ObjectKind::none ? Cell::empty() : Cell::object(inside.kind, inside.color);
          res.event = StepEvent::opened_box;
        }
      }
      break;
    }
    case Action::done: {
      res.event = StepEvent::noop;
      if (spec_.noisy_tv && st.tv_x >= 0) {
        st.at(st.tv_x, st.tv_y).color = static_cast<Color>(st.rng.below(kNumColors));
        res.event = StepEvent::tv_trigger;
      }
      break;
    }
  }

  if (spec_.family == TaskFamily::dynamicobstacles && !res.done) move_obstacles();

  if (!res.done && st.step_count >= st.max_steps) {
    res.done = true;
    if (res.event == StepEvent::noop || res.event == StepEvent::turned ||
        res.event == StepEvent::moved || res.event == StepEvent::bumped)
      res.event = StepEvent::timeout;
  }
  terminated_ = res.done;
  encode();
  return res;
}

void Env::move_obstacles() {
  EnvState& st = state_;
  for (auto& [ox, oy] : st.obstacles) {
    const int d = static_cast<int>(st.rng.below(4));
    const Dir dir = static_cast<Dir>(d);
    const int nx = ox + dx(dir);
    const int ny = oy + dy(dir);
    if (!st.in_bounds(nx, ny)) continue;
    if (st.at(nx, ny).kind != ObjectKind::none) continue;
    if (nx == st.agent.x && ny == st.agent.y) continue;
    bool taken = false;
    for (const auto& [qx, qy] : st.obstacles)
      if (qx == nx && qy == ny) taken = true;
    if (taken) continue;
    ox = nx;
    oy = ny;
  }
}

int Env::room_of(int x, int y) const {
  for (size_t i = 0; i < state_.rooms.size(); i++)
    if (state_.rooms[i].contains(x, y)) return static_cast<int>(i) + 1;
  return 0;
}

void Env::encode() { obs_ = encode_observation(state_, spec_.view_size); }

Observation encode_observation(const EnvState& state, int view_size) {
  const int V = view_size;
  const int cx = V / 2;       // agent view column
  const int cy = V - 1;       // agent view row
  const AgentPose& ag = state.agent;

  // view(row r, col c): forward distance f = V-1-r, lateral offset l = c-cx
  // (positive = the agent's right hand side).
  auto world_of = [&](int r, int c, int& wx, int& wy) {
    const int f = V - 1 - r;
    const int l = c - cx;
    wx = wy = 0;
    switch (ag.dir) {
      case Dir::north: wx = ag.x + l; wy = ag.y - f; break;
      case Dir::south: wx = ag.x - l; wy = ag.y + f; break;
      case Dir::east: wx = ag.x + f; wy = ag.y + l; break;
      case Dir::west: wx = ag.x - f; wy = ag.y - l; break;
    }
  };

  // Cells outside the grid read as walls, like everything beyond the map edge.
  auto cell_at = [&](int r, int c) -> Cell {
    int wx, wy;
    world_of(r, c, wx, wy);
    if (!state.in_bounds(wx, wy)) return Cell::wall();
    Cell cell = state.at(wx, wy);
    for (const auto& [ox, oy] : state.obstacles)
      if (ox == wx && oy == wy) cell = Cell::object(ObjectKind::ball, Color::blue);
    return cell;
  };

  // Flood visibility from the agent's tile; walls and shut doors are opaque.
  std::vector<uint8_t> mask(static_cast<size_t>(V) * V, 0);
  auto m = [&](int r, int c) -> uint8_t& { return mask[static_cast<size_t>(r) * V + c]; };
  m(cy, cx) = 1;
  for (int r = V - 1; r >= 0; r--) {
    for (int c = 0; c < V - 1; c++) {
      if (!m(r, c) || cell_at(r, c).blocks_sight()) continue;
      m(r, c + 1) = 1;
      if (r > 0) {
        m(r - 1, c + 1) = 1;
        m(r - 1, c) = 1;
      }
    }
    for (int c = V - 1; c >= 1; c--) {
      if (!m(r, c) || cell_at(r, c).blocks_sight()) continue;
      m(r, c - 1) = 1;
      if (r > 0) {
        m(r - 1, c - 1) = 1;
        m(r - 1, c) = 1;
      }
    }
  }

  Observation obs(V);
  for (int r = 0; r < V; r++) {
    for (int c = 0; c < V; c++) {
      if (!m(r, c)) continue;  // stays (0, 0, 0)
      Cell cell = cell_at(r, c);
      if (r == cy && c == cx && ag.carrying)
        cell = Cell::object(ag.carrying->kind, ag.carrying->color);
      obs.at(r, c, 0) = obs_code(cell.kind);
      obs.at(r, c, 1) = static_cast<int8_t>(cell.color);
      obs.at(r, c, 2) = cell.kind == ObjectKind::door ? static_cast<int8_t>(cell.door_state) : 0;
    }
  }
  return obs;
}

std::string Env::render() const {
  const EnvState& st = state_;
  std::ostringstream out;
  for (int y = 0; y < st.height; y++) {
    for (int x = 0; x < st.width; x++) {
      char ch = '?';
      const Cell& c = st.at(x, y);
      switch (c.kind) {
        case ObjectKind::none: ch = '.'; break;
        case ObjectKind::wall: ch = '#'; break;
        case ObjectKind::goal: ch = 'G'; break;
        case ObjectKind::key: ch = 'K'; break;
        case ObjectKind::ball: ch = 'o'; break;
        case ObjectKind::box: ch = 'X'; break;
        case ObjectKind::door:
          ch = c.door_state == DoorState::open ? '/' : c.door_state == DoorState::closed ? '+' : 'L';
          break;
      }
      for (const auto& [ox, oy] : st.obstacles)
        if (ox == x && oy == y) ch = 'o';
      if (x == st.agent.x && y == st.agent.y) {
        switch (st.agent.dir) {
          case Dir::east: ch = '>'; break;
          case Dir::south: ch = 'v'; break;
          case Dir::west: ch = '<'; break;
          case Dir::north: ch = '^'; break;
        }
      }
      out << ch;
    }
    out << '\n';
  }
  out << "legend: #=wall .=floor /=open +=closed L=locked K=key o=ball X=box G=goal ><^v=agent\n";
  out << "step " << st.step_count << "/" << st.max_steps;
  if (st.agent.carrying)
    out << " carrying " << to_string(st.agent.carrying->color) << " "
        << to_string(st.agent.carrying->kind);
  out << '\n';
  for (int y = 0; y < st.height; y++)
    for (int x = 0; x < st.width; x++) {
      const Cell& c = st.at(x, y);
      if (c.kind == ObjectKind::door || c.kind == ObjectKind::key || c.kind == ObjectKind::ball ||
          c.kind == ObjectKind::box || c.kind == ObjectKind::goal) {
        out << to_string(c.kind) << " (" << x << "," << y << ") " << to_string(c.color);
        if (c.kind == ObjectKind::door)
          out << " " << (c.door_state == DoorState::open    ? "open"
                         : c.door_state == DoorState::closed ? "closed"
                                                             : "locked");
        out << '\n';
      }
    }
  return out.str();
}

}  // namespace ride::grid
