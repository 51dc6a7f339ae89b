#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ride/core/error.hpp"

namespace ride::grid {

inline constexpr int kNumActions = 7;
inline constexpr int kNumColors = 6;
inline constexpr int kObsChannels = 3;
inline constexpr int kDefaultView = 7;

enum class Action : int {
  turn_left = 0,
  turn_right = 1,
  forward = 2,
  pickup = 3,
  drop = 4,
  toggle = 5,
  done = 6,
};

enum class ObjectKind : uint8_t { none = 0, wall, door, key, ball, box, goal };

enum class Color : uint8_t { red = 0, green, blue, purple, yellow, grey };

enum class DoorState : uint8_t { open = 0, closed, locked };

// Facing direction; turn_right advances east -> south -> west -> north.
enum class Dir : uint8_t { east = 0, south, west, north };

inline int dx(Dir d) { return d == Dir::east ? 1 : d == Dir::west ? -1 : 0; }
inline int dy(Dir d) { return d == Dir::south ? 1 : d == Dir::north ? -1 : 0; }
inline Dir rotate_right(Dir d) { return static_cast<Dir>((static_cast<int>(d) + 1) % 4); }
inline Dir rotate_left(Dir d) { return static_cast<Dir>((static_cast<int>(d) + 3) % 4); }

struct Item {
  ObjectKind kind = ObjectKind::none;
  Color color = Color::red;
  bool operator==(const Item&) const = default;
};

// One grid tile. door_state is meaningful only for doors, contents only for
// boxes; both stay at their defaults elsewhere.
struct Cell {
  ObjectKind kind = ObjectKind::none;
  Color color = Color::red;
  DoorState door_state = DoorState::open;
  Item contents;

  bool operator==(const Cell&) const = default;

  static Cell empty() { return {}; }
  static Cell wall(Color c = Color::grey) { return {ObjectKind::wall, c, DoorState::open, {}}; }
  static Cell goal(Color c = Color::green) { return {ObjectKind::goal, c, DoorState::open, {}}; }
  static Cell door(Color c, DoorState s) { return {ObjectKind::door, c, s, {}}; }
  static Cell object(ObjectKind k, Color c) { return {k, c, DoorState::open, {}}; }
  static Cell box(Color c, Item inside) { return {ObjectKind::box, c, DoorState::open, inside}; }

  bool is_traversable() const {
    return kind == ObjectKind::none || kind == ObjectKind::goal ||
           (kind == ObjectKind::door && door_state == DoorState::open);
  }
  bool blocks_sight() const {
    return kind == ObjectKind::wall ||
           (kind == ObjectKind::door && door_state != DoorState::open);
  }
  bool is_pickable() const {
    return kind == ObjectKind::key || kind == ObjectKind::ball || kind == ObjectKind::box;
  }
};

struct AgentPose {
  int x = 0;
  int y = 0;
  Dir dir = Dir::east;
  std::optional<Item> carrying;
  Item carried_contents;  // what's inside a carried box
};

// Observation tile encoding, channel 0. 0 is reserved for occluded tiles.
enum ObsCode : int8_t {
  kObsUnseen = 0,
  kObsEmpty = 1,
  kObsWall = 2,
  kObsDoor = 3,
  kObsKey = 4,
  kObsBall = 5,
  kObsBox = 6,
  kObsGoal = 7,
};

// Egocentric partial view, V x V x 3 (type, color, door-state), row-major
// channel-last. Row V-1 is the agent's row; the agent faces row 0.
struct Observation {
  int view = kDefaultView;
  std::vector<int8_t> data;

  Observation() = default;
  explicit Observation(int v) : view(v), data(static_cast<size_t>(v) * v * kObsChannels) {}

  int8_t& at(int row, int col, int ch) { return data[(static_cast<size_t>(row) * view + col) * kObsChannels + ch]; }
  int8_t at(int row, int col, int ch) const { return data[(static_cast<size_t>(row) * view + col) * kObsChannels + ch]; }

  bool operator==(const Observation&) const = default;
};

// FNV-1a over the observation bytes: deterministic and stable across runs.
inline uint64_t hash_bytes(const int8_t* p, size_t n) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (size_t i = 0; i < n; i++) {
    h ^= static_cast<uint8_t>(p[i]);
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t hash_observation(const Observation& obs) {
  return hash_bytes(obs.data.data(), obs.data.size());
}

enum class TaskFamily {
  multiroom,
  keycorridor,
  obstructedmaze,
  dynamicobstacles,
};

// Parsed task identity, e.g. "multiroom-n7-s4", "multiroom-noisytv-n2-s4",
// "colorgen-multiroom-n7-s4", "keycorridor-s3-r3", "obstructedmaze-2dlh",
// "dynamicobstacles-8-4".
struct TaskSpec {
  TaskFamily family = TaskFamily::multiroom;
  int rooms = 7;       // multiroom X
  int room_size = 4;   // multiroom Y (at most), keycorridor S
  int kc_rows = 3;     // keycorridor R
  int size = 8;        // dynamicobstacles grid side
  int n_obstacles = 4; // dynamicobstacles
  bool noisy_tv = false;
  bool colorgen = false;
  std::vector<Color> color_set;  // colorgen wall/goal colors
  std::optional<uint64_t> singleton_seed;
  int view_size = kDefaultView;

  static TaskSpec parse(const std::string& name);
  std::string name() const;
  void validate() const;
  int max_steps() const;
};

inline const std::vector<Color> kColorgenTrainSet = {Color::red, Color::blue, Color::purple,
                                                     Color::yellow};
inline const std::vector<Color> kColorgenHeldOutSet = {Color::green, Color::grey};

const char* to_string(Action a);
const char* to_string(ObjectKind k);
const char* to_string(Color c);
const char* to_string(Dir d);

}  // namespace ride::grid
