#include "ride/grid/types.hpp"

#include <charconv>
#include <sstream>

namespace ride::grid {

namespace {

bool consume_prefix(std::string& s, const std::string& prefix) {
  if (s.rfind(prefix, 0) != 0) return false;
  s.erase(0, prefix.size());
  return true;
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("bad " + what + " in task name: '" + s + "'");
  return v;
}

std::vector<std::string> split_dash(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, '-')) out.push_back(part);
  return out;
}

}  // namespace

TaskSpec TaskSpec::parse(const std::string& name) {
  TaskSpec spec;
  std::string s = name;
  if (consume_prefix(s, "colorgen-")) {
    spec.colorgen = true;
    spec.color_set = kColorgenTrainSet;
  }
  if (consume_prefix(s, "multiroom-")) {
    spec.family = TaskFamily::multiroom;
    if (consume_prefix(s, "noisytv-")) spec.noisy_tv = true;
    auto parts = split_dash(s);
    if (parts.size() != 2 || parts[0].empty() || parts[1].empty() || parts[0][0] != 'n' ||
        parts[1][0] != 's')
      throw ConfigError("expected multiroom-n<X>-s<Y>, got '" + name + "'");
    spec.rooms = parse_int(parts[0].substr(1), "room count");
    spec.room_size = parse_int(parts[1].substr(1), "room size");
  } else if (consume_prefix(s, "keycorridor-")) {
    spec.family = TaskFamily::keycorridor;
    auto parts = split_dash(s);
    if (parts.size() != 2 || parts[0].empty() || parts[1].empty() || parts[0][0] != 's' ||
        parts[1][0] != 'r')
      throw ConfigError("expected keycorridor-s<S>-r<R>, got '" + name + "'");
    spec.room_size = parse_int(parts[0].substr(1), "room size");
    spec.kc_rows = parse_int(parts[1].substr(1), "row count");
  } else if (s == "obstructedmaze-2dlh") {
    spec.family = TaskFamily::obstructedmaze;
  } else if (consume_prefix(s, "dynamicobstacles-")) {
    spec.family = TaskFamily::dynamicobstacles;
    auto parts = split_dash(s);
    if (parts.size() != 2) throw ConfigError("expected dynamicobstacles-<size>-<n>, got '" + name + "'");
    spec.size = parse_int(parts[0], "grid size");
    spec.n_obstacles = parse_int(parts[1], "obstacle count");
  } else {
    throw ConfigError("unknown task '" + name + "'");
  }
  spec.validate();
  return spec;
}

std::string TaskSpec::name() const {
  std::string s;
  if (colorgen) s += "colorgen-";
  switch (family) {
    case TaskFamily::multiroom:
      s += "multiroom-";
      if (noisy_tv) s += "noisytv-";
      s += "n" + std::to_string(rooms) + "-s" + std::to_string(room_size);
      break;
    case TaskFamily::keycorridor:
      s += "keycorridor-s" + std::to_string(room_size) + "-r" + std::to_string(kc_rows);
      break;
    case TaskFamily::obstructedmaze:
      s += "obstructedmaze-2dlh";
      break;
    case TaskFamily::dynamicobstacles:
      s += "dynamicobstacles-" + std::to_string(size) + "-" + std::to_string(n_obstacles);
      break;
  }
  return s;
}

void TaskSpec::validate() const {
  if (view_size < 3 || view_size % 2 == 0) throw ConfigError("view size must be odd and >= 3");
  switch (family) {
    case TaskFamily::multiroom:
      if (rooms < 2) throw ConfigError("multiroom needs at least 2 rooms");
      if (room_size < 4) throw ConfigError("multiroom room size must be >= 4");
      break;
    case TaskFamily::keycorridor:
      if (room_size < 3 || kc_rows < 1) throw ConfigError("bad keycorridor parameters");
      break;
    case TaskFamily::obstructedmaze:
      break;
    case TaskFamily::dynamicobstacles:
      if (size < 5) throw ConfigError("dynamicobstacles grid too small");
      if (n_obstacles < 1 || n_obstacles > (size - 2) * (size - 2) / 4)
        throw ConfigError("bad obstacle count");
      break;
  }
  if (colorgen && family != TaskFamily::multiroom)
    throw ConfigError("colorgen variant exists only for multiroom");
  if (colorgen && color_set.empty()) throw ConfigError("colorgen needs a color set");
}

int TaskSpec::max_steps() const {
  switch (family) {
    case TaskFamily::multiroom:
      return 20 * rooms;
    case TaskFamily::keycorridor:
      return 30 * room_size * room_size;  // 270 for S3
    case TaskFamily::obstructedmaze:
      return 576;
    case TaskFamily::dynamicobstacles:
      return 4 * size * size;
  }
  return 0;
}

const char* to_string(Action a) {
  switch (a) {
    case Action::turn_left: return "left";
    case Action::turn_right: return "right";
    case Action::forward: return "forward";
    case Action::pickup: return "pickup";
    case Action::drop: return "drop";
    case Action::toggle: return "toggle";
    case Action::done: return "done";
  }
  return "?";
}

const char* to_string(ObjectKind k) {
  switch (k) {
    case ObjectKind::none: return "empty";
    case ObjectKind::wall: return "wall";
    case ObjectKind::door: return "door";
    case ObjectKind::key: return "key";
    case ObjectKind::ball: return "ball";
    case ObjectKind::box: return "box";
    case ObjectKind::goal: return "goal";
  }
  return "?";
}

const char* to_string(Color c) {
  switch (c) {
    case Color::red: return "red";
    case Color::green: return "green";
    case Color::blue: return "blue";
    case Color::purple: return "purple";
    case Color::yellow: return "yellow";
    case Color::grey: return "grey";
  }
  return "?";
}

const char* to_string(Dir d) {
  switch (d) {
    case Dir::east: return "east";
    case Dir::south: return "south";
    case Dir::west: return "west";
    case Dir::north: return "north";
  }
  return "?";
}

}  // namespace ride::grid
