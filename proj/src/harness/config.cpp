#include "ride/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace ride::harness {

namespace {

struct Field {
  std::string name;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

std::string fmt_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

double parse_double(const std::string& s) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value '" + s + "'");
  }
}

int64_t parse_i64(const std::string& s) {
  int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("bad integer value '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw ConfigError("bad boolean value '" + s + "'");
}

#define STR_FIELD(member) \
  {#member, [](const ExperimentConfig& c) { return c.member; }, \
   [](ExperimentConfig& c, const std::string& v) { c.member = v; }}
#define U64_FIELD(member) \
  {#member, [](const ExperimentConfig& c) { return std::to_string(c.member); }, \
   [](ExperimentConfig& c, const std::string& v) { c.member = static_cast<uint64_t>(parse_i64(v)); }}
#define I64_FIELD(member) \
  {#member, [](const ExperimentConfig& c) { return std::to_string(c.member); }, \
   [](ExperimentConfig& c, const std::string& v) { c.member = parse_i64(v); }}
#define INT_FIELD(member) \
  {#member, [](const ExperimentConfig& c) { return std::to_string(c.member); }, \
   [](ExperimentConfig& c, const std::string& v) { c.member = static_cast<int>(parse_i64(v)); }}
#define DBL_FIELD(member) \
  {#member, [](const ExperimentConfig& c) { return fmt_double(c.member); }, \
   [](ExperimentConfig& c, const std::string& v) { c.member = parse_double(v); }}
#define BOOL_FIELD(member) \
  {#member, [](const ExperimentConfig& c) { return std::string(c.member ? "1" : "0"); }, \
   [](ExperimentConfig& c, const std::string& v) { c.member = parse_bool(v); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      STR_FIELD(task),
      STR_FIELD(method),
      U64_FIELD(seed),
      U64_FIELD(total_frames),
      INT_FIELD(batch_size),
      INT_FIELD(unroll_length),
      INT_FIELD(num_workers),
      BOOL_FIELD(sync),
      I64_FIELD(singleton_seed),
      BOOL_FIELD(no_extrinsic),
      DBL_FIELD(omega_ir),
      DBL_FIELD(entropy_coef),
      DBL_FIELD(learning_rate),
      DBL_FIELD(rms_momentum),
      DBL_FIELD(rms_epsilon),
      DBL_FIELD(rms_decay),
      DBL_FIELD(clip_grad_norm),
      I64_FIELD(anneal_frames),
      DBL_FIELD(gamma),
      DBL_FIELD(rho_bar),
      DBL_FIELD(c_bar),
      DBL_FIELD(baseline_coef),
      DBL_FIELD(omega_pi),
      DBL_FIELD(omega_fw),
      DBL_FIELD(omega_inv),
      INT_FIELD(view_size),
      INT_FIELD(eval_episodes),
      U64_FIELD(checkpoint_interval),
      DBL_FIELD(stop_return),
      BOOL_FIELD(trace),
  };
  return f;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

grid::TaskSpec ExperimentConfig::task_spec() const {
  grid::TaskSpec spec = grid::TaskSpec::parse(task);
  spec.view_size = view_size;
  if (singleton_seed >= 0) spec.singleton_seed = static_cast<uint64_t>(singleton_seed);
  return spec;
}

void default_coefficients(const grid::TaskSpec& task, intrinsic::Method method, double& omega_ir,
                          double& entropy_coef) {
  using intrinsic::Method;
  switch (method) {
    case Method::ride:
    case Method::only_episodic:
    case Method::no_episodic: {
      // The harder-task setting kicks in for large multiroom variants and
      // the obstructed maze.
      const bool hard = task.family == grid::TaskFamily::obstructedmaze ||
                        (task.family == grid::TaskFamily::multiroom && task.room_size >= 8);
      omega_ir = hard ? 0.5 : 0.1;
      entropy_coef = hard ? 0.001 : 0.0005;
      break;
    }
    case Method::icm:
    case Method::rnd:
      omega_ir = 0.1;
      entropy_coef = 0.0001;
      break;
    case Method::count:
      omega_ir = 0.005;
      entropy_coef = 0.0001;
      break;
    case Method::vanilla:
      omega_ir = 0.0;
      entropy_coef = 0.0001;
      break;
  }
}

intrinsic::RewardConfig ExperimentConfig::reward_config() const {
  intrinsic::RewardConfig rc;
  rc.method = method_enum();
  rc.no_extrinsic = no_extrinsic;
  double def_omega, def_entropy;
  default_coefficients(task_spec(), rc.method, def_omega, def_entropy);
  rc.omega_ir = omega_ir >= 0 ? omega_ir : def_omega;
  rc.entropy_coef = entropy_coef >= 0 ? entropy_coef : def_entropy;
  return rc;
}

nn::OptimConfig ExperimentConfig::optim_config() const {
  nn::OptimConfig oc;
  oc.learning_rate = learning_rate;
  oc.momentum = rms_momentum;
  oc.epsilon = rms_epsilon;
  oc.decay = rms_decay;
  oc.clip_norm = clip_grad_norm;
  oc.anneal_total_steps = anneal_frames >= 0 ? static_cast<uint64_t>(anneal_frames) : total_frames;
  return oc;
}

agent::LossWeights ExperimentConfig::loss_weights() const {
  return {omega_pi, omega_fw, omega_inv};
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  for (const auto& f : fields()) out << f.name << " = " << f.get(*this) << "\n";
  return out.str();
}

ExperimentConfig ExperimentConfig::deserialize(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos) throw ConfigError("bad config line: '" + line + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    bool known = false;
    for (const auto& f : fields()) {
      if (f.name == key) {
        f.set(cfg, value);
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }
  cfg.task_spec();  // validates task + view size
  cfg.method_enum();
  return cfg;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

void ExperimentConfig::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config: " + path);
  out << serialize();
}

std::string ExperimentConfig::diff(const ExperimentConfig& other) const {
  std::ostringstream out;
  for (const auto& f : fields()) {
    const std::string a = f.get(*this), b = f.get(other);
    if (a != b) out << f.name << ": " << a << " != " << b << "\n";
  }
  return out.str();
}

}  // namespace ride::harness
