#include "ride/ride.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "ride/analysis/reports.hpp"
#include "ride/grid/env.hpp"
#include "ride/harness/run.hpp"

namespace fs = std::filesystem;

namespace {

thread_local std::string g_last_error;

ride_status set_error(ride_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class F>
ride_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return RIDE_OK;
  } catch (const ride::ConfigError& e) {
    return set_error(RIDE_ERR_CONFIG, e.what());
  } catch (const ride::ContractViolation& e) {
    return set_error(RIDE_ERR_INVALID_ARGUMENT, e.what());
  } catch (const ride::NumericError& e) {
    return set_error(RIDE_ERR_NUMERIC, e.what());
  } catch (const ride::IoError& e) {
    return set_error(RIDE_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return set_error(RIDE_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(RIDE_ERR_INTERNAL, "unknown error");
  }
}

std::map<std::string, std::string> parse_options(const char* options) {
  std::map<std::string, std::string> out;
  if (!options) return out;
  std::stringstream ss(options);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw ride::ConfigError("bad analyze option '" + item + "' (want key=value)");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

}  // namespace

struct ride_config {
  ride::harness::ExperimentConfig cfg;
};

struct ride_env {
  ride::grid::Env env;
  explicit ride_env(ride::grid::TaskSpec spec) : env(std::move(spec)) {}
};

extern "C" {

const char* ride_status_name(ride_status status) {
  switch (status) {
    case RIDE_OK: return "ok";
    case RIDE_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case RIDE_ERR_CONFIG: return "config-error";
    case RIDE_ERR_IO: return "io-error";
    case RIDE_ERR_NUMERIC: return "numeric-error";
    case RIDE_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* ride_last_error(void) { return g_last_error.c_str(); }

ride_config* ride_config_new(void) { return new (std::nothrow) ride_config(); }

void ride_config_free(ride_config* config) { delete config; }

ride_status ride_config_set(ride_config* config, const char* key, const char* value) {
  if (!config || !key || !value)
    return set_error(RIDE_ERR_INVALID_ARGUMENT, "null argument to ride_config_set");
  return guarded([&] {
    // Route through the parser so unknown keys and bad values are rejected.
    auto updated = ride::harness::ExperimentConfig::deserialize(
        config->cfg.serialize() + std::string(key) + " = " + value + "\n");
    config->cfg = updated;
  });
}

ride_status ride_config_get(const ride_config* config, const char* key, char* buffer,
                            size_t buffer_size) {
  if (!config || !key || !buffer)
    return set_error(RIDE_ERR_INVALID_ARGUMENT, "null argument to ride_config_get");
  return guarded([&] {
    std::istringstream in(config->cfg.serialize());
    std::string line;
    const std::string want = std::string(key) + " = ";
    while (std::getline(in, line)) {
      if (line.rfind(want, 0) != 0) continue;
      const std::string value = line.substr(want.size());
      if (value.size() + 1 > buffer_size)
        throw ride::ContractViolation("buffer too small for config value");
      std::memcpy(buffer, value.c_str(), value.size() + 1);
      return;
    }
    throw ride::ConfigError("unknown config key '" + std::string(key) + "'");
  });
}

ride_status ride_config_load(ride_config* config, const char* path) {
  if (!config || !path)
    return set_error(RIDE_ERR_INVALID_ARGUMENT, "null argument to ride_config_load");
  return guarded([&] { config->cfg = ride::harness::ExperimentConfig::load_file(path); });
}

ride_status ride_config_save(const ride_config* config, const char* path) {
  if (!config || !path)
    return set_error(RIDE_ERR_INVALID_ARGUMENT, "null argument to ride_config_save");
  return guarded([&] { config->cfg.save_file(path); });
}

ride_env* ride_env_new(const char* task, int64_t singleton_seed) {
  if (!task) {
    set_error(RIDE_ERR_INVALID_ARGUMENT, "null task name");
    return nullptr;
  }
  ride_env* env = nullptr;
  const ride_status st = guarded([&] {
    auto spec = ride::grid::TaskSpec::parse(task);
    if (singleton_seed >= 0) spec.singleton_seed = static_cast<uint64_t>(singleton_seed);
    env = new ride_env(std::move(spec));
  });
  return st == RIDE_OK ? env : nullptr;
}

void ride_env_free(ride_env* env) { delete env; }

ride_status ride_env_reset(ride_env* env, uint64_t seed) {
  if (!env) return set_error(RIDE_ERR_INVALID_ARGUMENT, "null env");
  return guarded([&] { env->env.reset(seed); });
}

ride_status ride_env_step(ride_env* env, int action, double* reward, int* done) {
  if (!env) return set_error(RIDE_ERR_INVALID_ARGUMENT, "null env");
  if (action < 0 || action >= ride::grid::kNumActions)
    return set_error(RIDE_ERR_INVALID_ARGUMENT, "action out of range");
  return guarded([&] {
    const auto res = env->env.step(static_cast<ride::grid::Action>(action));
    if (reward) *reward = res.reward;
    if (done) *done = res.done ? 1 : 0;
  });
}

int ride_env_view_size(const ride_env* env) { return env ? env->env.task().view_size : 0; }

ride_status ride_env_observe(const ride_env* env, int8_t* buffer, size_t buffer_size) {
  if (!env || !buffer) return set_error(RIDE_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& data = env->env.obs().data;
    if (buffer_size < data.size()) throw ride::ContractViolation("observation buffer too small");
    std::memcpy(buffer, data.data(), data.size());
  });
}

uint64_t ride_env_obs_hash(const ride_env* env) { return env ? env->env.obs_hash() : 0; }

ride_status ride_env_agent(const ride_env* env, int* x, int* y, int* dir) {
  if (!env) return set_error(RIDE_ERR_INVALID_ARGUMENT, "null env");
  if (x) *x = env->env.state().agent.x;
  if (y) *y = env->env.state().agent.y;
  if (dir) *dir = static_cast<int>(env->env.state().agent.dir);
  return RIDE_OK;
}

int ride_env_width(const ride_env* env) { return env ? env->env.state().width : 0; }
int ride_env_height(const ride_env* env) { return env ? env->env.state().height : 0; }
int ride_env_step_count(const ride_env* env) { return env ? env->env.state().step_count : 0; }
int ride_env_max_steps(const ride_env* env) { return env ? env->env.state().max_steps : 0; }

size_t ride_env_render(const ride_env* env, char* buffer, size_t buffer_size) {
  if (!env || !buffer || buffer_size == 0) return 0;
  std::string text;
  if (guarded([&] { text = env->env.render(); }) != RIDE_OK) return 0;
  const size_t n = std::min(text.size(), buffer_size - 1);
  std::memcpy(buffer, text.data(), n);
  buffer[n] = '\0';
  return n;
}

ride_status ride_train(const ride_config* config, const char* out_dir, const char* resume_from,
                       ride_progress_fn progress, void* user_data) {
  if (!config || !out_dir)
    return set_error(RIDE_ERR_INVALID_ARGUMENT, "null argument to ride_train");
  return guarded([&] {
    ride::harness::ProgressFn fn;
    if (progress)
      fn = [progress, user_data](const ride::harness::ProgressInfo& info) {
        ride_progress p{info.frames, info.episodes, info.rolling_return, info.mean_intrinsic};
        progress(&p, user_data);
      };
    ride::harness::run_training(config->cfg, out_dir, fn, resume_from ? resume_from : "");
  });
}

ride_status ride_evaluate(const char* checkpoint_dir, const char* task, int episodes,
                          uint64_t seed, const char* color_mode, const char* traces_out,
                          int step_budget, double* mean_return, double* std_return) {
  if (!checkpoint_dir) return set_error(RIDE_ERR_INVALID_ARGUMENT, "null checkpoint dir");
  return guarded([&] {
    ride::harness::EvalOptions opts;
    opts.episodes = episodes;
    opts.seed = seed;
    opts.step_budget = step_budget;
    if (color_mode) opts.color_mode = color_mode;
    if (traces_out) opts.traces_out = traces_out;
    const auto res =
        ride::harness::evaluate_checkpoint(checkpoint_dir, task ? task : "", opts);
    if (mean_return) *mean_return = res.mean_return;
    if (std_return) *std_return = res.std_return;
  });
}

ride_status ride_analyze(const char* mode, const char* traces_dir, const char* out_dir,
                         const char* options) {
  if (!mode || !traces_dir || !out_dir)
    return set_error(RIDE_ERR_INVALID_ARGUMENT, "null argument to ride_analyze");
  return guarded([&] {
    namespace an = ride::analysis;
    const auto opts = parse_options(options);
    const std::string m = mode;
    fs::create_directories(out_dir);

    int width = 0, height = 0;
    if (auto it = opts.find("layout"); it != opts.end()) {
      std::ifstream in(it->second);
      if (!in) throw ride::IoError("cannot read layout: " + it->second);
      std::stringstream buf;
      buf << in.rdbuf();
      std::tie(width, height) = an::layout_dimensions(buf.str());
    }
    if (auto it = opts.find("width"); it != opts.end()) width = std::stoi(it->second);
    if (auto it = opts.find("height"); it != opts.end()) height = std::stoi(it->second);
    int window = 100;
    if (auto it = opts.find("window"); it != opts.end()) window = std::stoi(it->second);
    std::string groups_name = "doors";
    if (auto it = opts.find("groups"); it != opts.end()) groups_name = it->second;

    const std::string out = std::string(out_dir);
    if (m == "table") {
      const auto traces = an::read_trace_dir(traces_dir);
      an::write_group_table_csv(
          an::per_action_reward_table(traces, an::groups_by_name(groups_name)),
          out + "/table.csv");
    } else if (m == "visitmap") {
      const auto traces = an::read_trace_dir(traces_dir);
      const auto grid = an::state_visitation_heatmap(traces, width, height);
      an::write_heatmap_csv(grid, out + "/visitmap.csv");
      an::write_heatmap_pgm(grid, out + "/visitmap.pgm");
    } else if (m == "rewardmap") {
      const auto traces = an::read_trace_dir(traces_dir);
      for (const auto& [name, grid] :
           an::intrinsic_heatmap(traces, an::groups_by_name(groups_name), width, height)) {
        an::write_heatmap_csv(grid, out + "/rewardmap_" + name + ".csv");
        an::write_heatmap_pgm(grid, out + "/rewardmap_" + name + ".pgm");
      }
    } else if (m == "distinct") {
      const auto traces = an::read_trace_dir(traces_dir);
      an::write_distinct_csv(an::distinct_states_per_episode(traces, window),
                             out + "/distinct.csv");
    } else if (m == "decay") {
      bool any = false;
      for (const auto& entry : fs::directory_iterator(traces_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
        std::vector<ride::harness::RunLogRow> rows;
        try {
          rows = ride::harness::read_runlog(entry.path().string());
        } catch (const ride::IoError&) {
          continue;  // not a run log; skip
        }
        any = true;
        an::write_decay_csv(an::reward_decay_curve(rows, window),
                            out + "/decay_" + entry.path().stem().string() + ".csv");
      }
      if (!any) throw ride::IoError("no run logs found in " + std::string(traces_dir));
    } else {
      throw ride::ConfigError("unknown analyze mode '" + m +
                              "' (table|visitmap|rewardmap|distinct|decay)");
    }
  });
}

}  // extern "C"
