#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

#include "ride/grid/env.hpp"

namespace ride::grid {

namespace {

Color random_color(Rng& rng) { return static_cast<Color>(rng.below(kNumColors)); }

Color random_color_except(Rng& rng, std::optional<Color> avoid) {
  std::vector<Color> pool;
  for (int i = 0; i < kNumColors; i++) {
    auto c = static_cast<Color>(i);
    if (!avoid || c != *avoid) pool.push_back(c);
  }
  return pool[rng.below(pool.size())];
}

// Rejection-samples an empty interior tile of `room` that is not the agent's.
std::pair<int, int> place_in_room(EnvState& st, const RoomRect& room, Rng& rng) {
  for (int tries = 0; tries < 1000; tries++) {
    const int x = rng.between(room.x + 1, room.x + room.w - 1);
    const int y = rng.between(room.y + 1, room.y + room.h - 1);
    if (st.at(x, y).kind != ObjectKind::none) continue;
    if (x == st.agent.x && y == st.agent.y) continue;
    return {x, y};
  }
  throw ConfigError("no free tile left in room");
}

void place_agent_in_room(EnvState& st, const RoomRect& room, Rng& rng) {
  st.agent.x = -1;
  st.agent.y = -1;
  auto [x, y] = place_in_room(st, room, rng);
  st.agent.x = x;
  st.agent.y = y;
  st.agent.dir = static_cast<Dir>(rng.below(4));
  st.agent.carrying.reset();
}

void draw_room_walls(EnvState& st, const RoomRect& r) {
  for (int i = 0; i < r.w; i++) {
    st.at(r.x + i, r.y) = Cell::wall(st.wall_color);
    st.at(r.x + i, r.y + r.h - 1) = Cell::wall(st.wall_color);
  }
  for (int j = 0; j < r.h; j++) {
    st.at(r.x, r.y + j) = Cell::wall(st.wall_color);
    st.at(r.x + r.w - 1, r.y + j) = Cell::wall(st.wall_color);
  }
}

// ---------------------------------------------------------------------------
// MultiRoom: rooms of random size chained in random orientations, one door
// between consecutive rooms, goal in the last room.

struct RoomCand {
  int x, y, w, h;
  int entry_x, entry_y;  // door to the previous room (rooms after the first)
};

// Walls: 0 = right, 1 = bottom, 2 = left, 3 = top.
bool place_room_chain(int num_left, std::vector<RoomCand>& rooms, int min_sz, int max_sz,
                      int entry_wall, int ex, int ey, int W, int H, Rng& rng) {
  const int sw = rng.between(min_sz, max_sz + 1);
  const int sh = rng.between(min_sz, max_sz + 1);
  int tx, ty;
  if (rooms.empty()) {
    tx = ex;
    ty = ey;
  } else if (entry_wall == 0) {
    tx = ex - sw + 1;
    ty = rng.between(ey - sh + 2, ey);
  } else if (entry_wall == 1) {
    ty = ey - sh + 1;
    tx = rng.between(ex - sw + 2, ex);
  } else if (entry_wall == 2) {
    tx = ex;
    ty = rng.between(ey - sh + 2, ey);
  } else {
    ty = ey;
    tx = rng.between(ex - sw + 2, ex);
  }
  if (tx < 0 || ty < 0 || tx + sw > W || ty + sh > H) return false;
  // May not intersect earlier rooms; sharing a wall with the parent is fine.
  for (size_t i = 0; i + 1 < rooms.size(); i++) {
    const auto& r = rooms[i];
    const bool apart = tx + sw < r.x || r.x + r.w <= tx || ty + sh < r.y || r.y + r.h <= ty;
    if (!apart) return false;
  }
  rooms.push_back({tx, ty, sw, sh, ex, ey});
  if (num_left == 1) return true;
  for (int tries = 0; tries < 8; tries++) {
    int exit_wall = rng.between(0, 3);
    if (exit_wall >= entry_wall) exit_wall++;  // any wall but the entry one
    int door_x = 0, door_y = 0;
    switch (exit_wall) {
      case 0: door_x = tx + sw - 1; door_y = ty + rng.between(1, sh - 1); break;
      case 1: door_y = ty + sh - 1; door_x = tx + rng.between(1, sw - 1); break;
      case 2: door_x = tx; door_y = ty + rng.between(1, sh - 1); break;
      default: door_y = ty; door_x = tx + rng.between(1, sw - 1); break;
    }
    if (place_room_chain(num_left - 1, rooms, min_sz, max_sz, (exit_wall + 2) % 4, door_x, door_y,
                         W, H, rng))
      return true;
  }
  return true;  // partial chain; the caller keeps the longest one
}

EnvState build_multiroom(const TaskSpec& spec, Rng& rng) {
  const int canvas = std::max(25, 3 * spec.room_size);
  std::vector<RoomCand> rooms;
  while (static_cast<int>(rooms.size()) < spec.rooms) {
    std::vector<RoomCand> attempt;
    const int ex = rng.between(0, canvas - 2);
    const int ey = rng.between(0, canvas - 2);
    place_room_chain(spec.rooms, attempt, 4, spec.room_size, 2, ex, ey, canvas, canvas, rng);
    if (attempt.size() > rooms.size()) rooms = std::move(attempt);
  }

  EnvState st;
  st.width = st.height = canvas;
  st.cells.assign(static_cast<size_t>(canvas) * canvas, Cell::empty());
  st.max_steps = spec.max_steps();
  if (spec.colorgen) {
    st.wall_color = spec.color_set[rng.below(spec.color_set.size())];
    st.goal_color = spec.color_set[rng.below(spec.color_set.size())];
  }

  std::optional<Color> prev_door;
  for (size_t i = 0; i < rooms.size(); i++) {
    const auto& r = rooms[i];
    st.rooms.push_back({r.x, r.y, r.w, r.h});
    draw_room_walls(st, st.rooms.back());
    if (i > 0) {
      const Color c = random_color_except(rng, prev_door);
      st.at(r.entry_x, r.entry_y) = Cell::door(c, DoorState::closed);
      prev_door = c;
    }
  }

  place_agent_in_room(st, st.rooms.front(), rng);
  auto [gx, gy] = place_in_room(st, st.rooms.back(), rng);
  st.at(gx, gy) = Cell::goal(st.goal_color);

  if (spec.noisy_tv) {
    auto [tx, ty] = place_in_room(st, st.rooms.front(), rng);
    st.at(tx, ty) = Cell::object(ObjectKind::ball, random_color(rng));
    st.tv_x = tx;
    st.tv_y = ty;
  }
  return st;
}

// ---------------------------------------------------------------------------
// KeyCorridor: a vertical corridor of connected rooms, side rooms behind
// closed doors, the target ball behind the one locked door, its key in a room
// on the opposite side.

EnvState build_keycorridor(const TaskSpec& spec, Rng& rng) {
  const int S = spec.room_size;
  const int R = spec.kc_rows;
  EnvState st;
  st.width = (S - 1) * 3 + 1;
  st.height = (S - 1) * R + 1;
  st.cells.assign(static_cast<size_t>(st.width) * st.height, Cell::empty());
  st.max_steps = spec.max_steps();

  for (int col = 0; col < 3; col++)
    for (int row = 0; row < R; row++) {
      RoomRect r{col * (S - 1), row * (S - 1), S, S};
      st.rooms.push_back(r);
      draw_room_walls(st, r);
    }

  // Open the corridor: remove walls between vertically adjacent middle rooms.
  for (int row = 1; row < R; row++)
    for (int x = S; x <= 2 * (S - 1) - 1; x++) st.at(x, row * (S - 1)) = Cell::empty();

  const int target_row = rng.between(0, R);
  const Color lock_color = random_color(rng);
  for (int row = 0; row < R; row++) {
    const int ly = row * (S - 1) + rng.between(1, S - 1);
    st.at(S - 1, ly) = Cell::door(random_color(rng), DoorState::closed);
    const int ry = row * (S - 1) + rng.between(1, S - 1);
    if (row == target_row)
      st.at(2 * (S - 1), ry) = Cell::door(lock_color, DoorState::locked);
    else
      st.at(2 * (S - 1), ry) = Cell::door(random_color(rng), DoorState::closed);
  }

  // Target ball behind the locked door, key somewhere on the left.
  const RoomRect right_room{2 * (S - 1), target_row * (S - 1), S, S};
  auto [bx, by] = place_in_room(st, right_room, rng);
  const Color ball_color = random_color(rng);
  st.at(bx, by) = Cell::object(ObjectKind::ball, ball_color);
  st.target = {ObjectKind::ball, ball_color};

  const int key_row = rng.between(0, R);
  const RoomRect left_room{0, key_row * (S - 1), S, S};
  auto [kx, ky] = place_in_room(st, left_room, rng);
  st.at(kx, ky) = Cell::object(ObjectKind::key, lock_color);

  // Agent starts in the corridor.
  st.agent.carrying.reset();
  st.agent.dir = static_cast<Dir>(rng.below(4));
  for (int tries = 0;; tries++) {
    if (tries >= 1000) throw ConfigError("no corridor tile free");
    const int x = rng.between(S, 2 * (S - 1));
    const int y = rng.between(1, st.height - 1);
    if (st.at(x, y).kind == ObjectKind::none) {
      st.agent.x = x;
      st.agent.y = y;
      break;
    }
  }
  return st;
}

// ---------------------------------------------------------------------------
// ObstructedMaze (2Dlh level): start room with two locked doors, each
// obstructed by a ball; keys hidden in boxes; the blue target ball waits in
// one of the two side rooms.

EnvState build_obstructedmaze(const TaskSpec& spec, Rng& rng) {
  const int S = 6;
  EnvState st;
  st.width = st.height = 2 * (S - 1) + 1;
  st.cells.assign(static_cast<size_t>(st.width) * st.height, Cell::empty());
  st.max_steps = spec.max_steps();

  const RoomRect start{0, 0, S, S};
  const RoomRect right{S - 1, 0, S, S};
  const RoomRect bottom{0, S - 1, S, S};
  const RoomRect corner{S - 1, S - 1, S, S};
  for (const auto& r : {start, right, bottom, corner}) {
    st.rooms.push_back(r);
    draw_room_walls(st, r);
  }

  const Color c_right = random_color(rng);
  const Color c_bottom = random_color_except(rng, c_right);
  const int door_right_y = rng.between(1, S - 1);
  const int door_bottom_x = rng.between(1, S - 1);
  st.at(S - 1, door_right_y) = Cell::door(c_right, DoorState::locked);
  st.at(door_bottom_x, S - 1) = Cell::door(c_bottom, DoorState::locked);

  // Balls obstructing the doors, on the start-room side; never blue, the
  // target's color.
  auto blocker_color = [&] {
    Color c;
    do {
      c = random_color(rng);
    } while (c == Color::blue);
    return c;
  };
  st.at(S - 2, door_right_y) = Cell::object(ObjectKind::ball, blocker_color());
  st.at(door_bottom_x, S - 2) = Cell::object(ObjectKind::ball, blocker_color());

  st.agent.carrying.reset();
  place_agent_in_room(st, start, rng);

  auto [b1x, b1y] = place_in_room(st, start, rng);
  st.at(b1x, b1y) = Cell::box(c_right, {ObjectKind::key, c_right});
  auto [b2x, b2y] = place_in_room(st, start, rng);
  st.at(b2x, b2y) = Cell::box(c_bottom, {ObjectKind::key, c_bottom});

  const RoomRect& target_room = rng.below(2) == 0 ? right : bottom;
  auto [tx, ty] = place_in_room(st, target_room, rng);
  st.at(tx, ty) = Cell::object(ObjectKind::ball, Color::blue);
  st.target = {ObjectKind::ball, Color::blue};
  return st;
}

// ---------------------------------------------------------------------------
// DynamicObstacles: an open room with randomly drifting balls and a fixed
// goal in the far corner.

EnvState build_dynamicobstacles(const TaskSpec& spec, Rng& rng) {
  const int N = spec.size;
  EnvState st;
  st.width = st.height = N;
  st.cells.assign(static_cast<size_t>(N) * N, Cell::empty());
  st.max_steps = spec.max_steps();
  const RoomRect room{0, 0, N, N};
  st.rooms.push_back(room);
  draw_room_walls(st, room);
  st.at(N - 2, N - 2) = Cell::goal();

  place_agent_in_room(st, room, rng);
  for (int i = 0; i < spec.n_obstacles; i++) {
    for (int tries = 0;; tries++) {
      if (tries >= 1000) throw ConfigError("no room for obstacles");
      const int x = rng.between(1, N - 1);
      const int y = rng.between(1, N - 1);
      if (st.at(x, y).kind != ObjectKind::none) continue;
      if (x == st.agent.x && y == st.agent.y) continue;
      bool taken = false;
      for (auto& [ox, oy] : st.obstacles)
        if (ox == x && oy == y) taken = true;
      if (taken) continue;
      st.obstacles.emplace_back(x, y);
      break;
    }
  }
  return st;
}

// ---------------------------------------------------------------------------
// Scripted solver: Dijkstra over (x, y, dir) poses. Closed unlocked doors
// cost one extra action (the toggle); locked doors and objects block.

std::optional<std::vector<Action>> route(const EnvState& st,
                                         const std::function<bool(int, int, Dir)>& accept) {
  const int W = st.width, H = st.height;
  const int n = W * H * 4;
  auto id = [&](int x, int y, Dir d) { return (y * W + x) * 4 + static_cast<int>(d); };
  std::vector<int> dist(n, std::numeric_limits<int>::max());
  std::vector<int> prev(n, -1);
  std::vector<Action> prev_act(n, Action::done);

  using QE = std::pair<int, int>;  // (dist, node)
  std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
  const int start = id(st.agent.x, st.agent.y, st.agent.dir);
  dist[start] = 0;
  pq.push({0, start});

  int goal_node = -1;
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d != dist[u]) continue;
    const int ux = (u / 4) % W, uy = u / 4 / W;
    const Dir ud = static_cast<Dir>(u % 4);
    if (accept(ux, uy, ud)) {
      goal_node = u;
      break;
    }
    auto relax = [&](int v, int cost, Action a) {
      if (dist[u] + cost < dist[v]) {
        dist[v] = dist[u] + cost;
        prev[v] = u;
        prev_act[v] = a;
        pq.push({dist[v], v});
      }
    };
    relax(id(ux, uy, rotate_left(ud)), 1, Action::turn_left);
    relax(id(ux, uy, rotate_right(ud)), 1, Action::turn_right);
    const int fx = ux + dx(ud), fy = uy + dy(ud);
    if (st.in_bounds(fx, fy)) {
      const Cell& c = st.at(fx, fy);
      if (c.is_traversable())
        relax(id(fx, fy, ud), 1, Action::forward);
      else if (c.kind == ObjectKind::door && c.door_state == DoorState::closed)
        relax(id(fx, fy, ud), 2, Action::forward);  // toggle first, then step
    }
  }
  if (goal_node < 0) return std::nullopt;

  std::vector<Action> actions;
  for (int u = goal_node; u != start; u = prev[u]) actions.push_back(prev_act[u]);
  std::reverse(actions.begin(), actions.end());

  // Splice in the door toggles the cost-2 forward edges stand for.
  std::vector<Action> out;
  EnvState sim = st;  // door states evolve as we walk the plan
  for (Action a : actions) {
    if (a == Action::forward) {
      const int fx = sim.agent.x + dx(sim.agent.dir), fy = sim.agent.y + dy(sim.agent.dir);
      Cell& c = sim.at(fx, fy);
      if (c.kind == ObjectKind::door && c.door_state == DoorState::closed) {
        out.push_back(Action::toggle);
        c.door_state = DoorState::open;
      }
      sim.agent.x = fx;
      sim.agent.y = fy;
    } else if (a == Action::turn_left) {
      sim.agent.dir = rotate_left(sim.agent.dir);
    } else if (a == Action::turn_right) {
      sim.agent.dir = rotate_right(sim.agent.dir);
    }
    out.push_back(a);
  }
  return out;
}

struct Solver {
  Env env;
  int steps = 0;
  bool success = false;

  explicit Solver(const Env& e) : env(e) {}

  bool run(const std::vector<Action>& actions) {
    for (Action a : actions) {
      if (env.terminated()) return false;
      auto res = env.step(a);
      steps++;
      if (res.done) {
        success = res.reward > 0;
        return success;
      }
    }
    return !env.terminated();
  }

  bool go_facing(int tx, int ty) {
    auto plan = route(env.state(), [&](int x, int y, Dir d) {
      return x + dx(d) == tx && y + dy(d) == ty;
    });
    return plan && run(*plan);
  }

  bool go_onto(int tx, int ty) {
    auto plan = route(env.state(), [&](int x, int y, Dir) { return x == tx && y == ty; });
    return plan && run(*plan);
  }

  // Turns toward any empty neighbour (optionally avoiding one tile) and
  // performs `a`; used to drop carried objects out of the way.
  bool facing_empty_then(Action a, int avoid_x = -1, int avoid_y = -1) {
    const auto& st = env.state();
    for (const auto& turns :
         {std::vector<Action>{}, {Action::turn_left}, {Action::turn_right},
          std::vector<Action>{Action::turn_left, Action::turn_left}}) {
      Dir d = st.agent.dir;
      for (Action t : turns) d = t == Action::turn_left ? rotate_left(d) : rotate_right(d);
      const int fx = st.agent.x + dx(d), fy = st.agent.y + dy(d);
      if (!st.in_bounds(fx, fy) || st.at(fx, fy).kind != ObjectKind::none) continue;
      if (st.is_tv(fx, fy)) continue;
      if (fx == avoid_x && fy == avoid_y) continue;
      auto seq = turns;
      seq.push_back(a);
      return run(seq);
    }
    return false;
  }

  std::optional<std::pair<int, int>> find(const std::function<bool(const Cell&)>& pred) {
    const auto& st = env.state();
    for (int y = 0; y < st.height; y++)
      for (int x = 0; x < st.width; x++)
        if (pred(st.at(x, y))) return std::make_pair(x, y);
    return std::nullopt;
  }
};

}  // namespace

EnvState build_layout(const TaskSpec& spec, Rng& rng) {
  EnvState st;
  switch (spec.family) {
    case TaskFamily::multiroom: st = build_multiroom(spec, rng); break;
    case TaskFamily::keycorridor: st = build_keycorridor(spec, rng); break;
    case TaskFamily::obstructedmaze: st = build_obstructedmaze(spec, rng); break;
    case TaskFamily::dynamicobstacles: st = build_dynamicobstacles(spec, rng); break;
  }
  st.step_count = 0;
  st.rng = rng.split(0x1234abcdull);
  return st;
}

std::optional<int> scripted_solve(const Env& env) {
  const TaskSpec& spec = env.task();
  Solver s(env);

  switch (spec.family) {
    case TaskFamily::multiroom: {
      auto goal = s.find([](const Cell& c) { return c.kind == ObjectKind::goal; });
      if (!goal || !s.go_onto(goal->first, goal->second)) return std::nullopt;
      break;
    }
    case TaskFamily::keycorridor: {
      auto key = s.find([](const Cell& c) { return c.kind == ObjectKind::key; });
      auto locked = s.find(
          [](const Cell& c) { return c.kind == ObjectKind::door && c.door_state == DoorState::locked; });
      auto ball = s.find([](const Cell& c) { return c.kind == ObjectKind::ball; });
      if (!key || !locked || !ball) return std::nullopt;
      if (!s.go_facing(key->first, key->second) || !s.run({Action::pickup})) return std::nullopt;
      if (!s.go_facing(locked->first, locked->second) || !s.run({Action::toggle})) return std::nullopt;
      // One object at a time: shed the key before grabbing the ball.
      if (!s.go_facing(ball->first, ball->second)) return std::nullopt;
      if (!s.facing_empty_then(Action::drop)) return std::nullopt;
      if (!s.go_facing(ball->first, ball->second)) return std::nullopt;
      s.run({Action::pickup});
      break;
    }
    case TaskFamily::obstructedmaze: {
      auto target = s.find(
          [](const Cell& c) { return c.kind == ObjectKind::ball && c.color == Color::blue; });
      if (!target) return std::nullopt;
      // Which locked door leads to the target's room?
      const auto& st0 = s.env.state();
      int door_x = -1, door_y = -1;
      for (int y = 0; y < st0.height && door_x < 0; y++)
        for (int x = 0; x < st0.width && door_x < 0; x++) {
          const Cell& c = st0.at(x, y);
          if (c.kind != ObjectKind::door || c.door_state != DoorState::locked) continue;
          const bool right_door = x > y;  // door on the vertical wall
          const bool target_right = st0.rooms[1].contains(target->first, target->second);
          if (right_door == target_right) {
            door_x = x;
            door_y = y;
          }
        }
      if (door_x < 0) return std::nullopt;
      const Color need = st0.at(door_x, door_y).color;

      // Clear the blocking ball.
      const int blocker_x = door_x - (door_x > door_y ? 1 : 0);
      const int blocker_y = door_y - (door_x > door_y ? 0 : 1);
      if (s.env.state().at(blocker_x, blocker_y).kind == ObjectKind::ball) {
        if (!s.go_facing(blocker_x, blocker_y) || !s.run({Action::pickup})) return std::nullopt;
        if (!s.facing_empty_then(Action::drop, blocker_x, blocker_y)) return std::nullopt;
      }

      // Fetch the matching key from its box.
      auto box = s.find([&](const Cell& c) {
        return c.kind == ObjectKind::box && c.contents.kind == ObjectKind::key &&
               c.contents.color == need;
      });
      if (!box) return std::nullopt;
      if (!s.go_facing(box->first, box->second) || !s.run({Action::toggle})) return std::nullopt;
      if (!s.go_facing(box->first, box->second) || !s.run({Action::pickup})) return std::nullopt;
      if (!s.go_facing(door_x, door_y) || !s.run({Action::toggle})) return std::nullopt;

      // Hands must be free for the target ball.
      auto tgt = s.find(
          [](const Cell& c) { return c.kind == ObjectKind::ball && c.color == Color::blue; });
      if (!tgt || !s.go_facing(tgt->first, tgt->second)) return std::nullopt;
      if (!s.facing_empty_then(Action::drop)) return std::nullopt;
      if (!s.go_facing(tgt->first, tgt->second)) return std::nullopt;
      s.run({Action::pickup});
      break;
    }
    case TaskFamily::dynamicobstacles:
      return std::nullopt;  // no static certificate for moving obstacles
  }

  if (!s.success) return std::nullopt;
  return s.steps;
}

}  // namespace ride::grid
