// Command-line front end. Talks to the engine exclusively through the C API
// in ride/ride.h, the same surface any other embedder would use.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ride/ride.h"

namespace {

int fail(const char* what) {
  std::fprintf(stderr, "ride: %s: %s\n", what, ride_last_error());
  return 1;
}

struct ConfigHandle {
  ride_config* ptr;
  ConfigHandle() : ptr(ride_config_new()) {}
  ~ConfigHandle() { ride_config_free(ptr); }
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
};

std::string default_out_dir(const ride_config* cfg, const std::string& out_flag) {
  if (!out_flag.empty()) return out_flag;
  char task[128] = "", method[64] = "", seed[32] = "";
  ride_config_get(cfg, "task", task, sizeof(task));
  ride_config_get(cfg, "method", method, sizeof(method));
  ride_config_get(cfg, "seed", seed, sizeof(seed));
  const char* root = std::getenv("RIDE_LOG_DIR");
  std::string dir = root && *root ? root : "runs";
  return dir + "/" + task + "-" + method + "-seed" + seed;
}

void progress_printer(const ride_progress* p, void*) {
  std::printf("\rframes %" PRIu64 "  episodes %" PRIu64 "  return %.3f  r_i %.4f   ", p->frames,
              p->episodes, p->rolling_return, p->mean_intrinsic);
  std::fflush(stdout);
}

struct TrainArgs {
  std::string task, method = "ride", config_file, out, resume;
  uint64_t total_frames = 0, seed = 0;
  int64_t singleton = -1;
  bool no_extrinsic = false, sync = false, async_mode = false, trace = false, quiet = false;
  double omega_ir = -2, entropy = -2, lr = -1, stop_return = -1;
  int batch = 0, unroll = 0, workers = 0;

  void add_options(CLI::App* app) {
    app->add_option("--task", task, "task name, e.g. multiroom-n7-s4");
    app->add_option("--method", method, "ride|icm|rnd|count|only-episodic|no-episodic|vanilla");
    app->add_option("--total-frames", total_frames, "environment steps to train for");
    app->add_option("--seed", seed, "run seed");
    app->add_option("--singleton", singleton, "fix the layout to this seed every episode");
    app->add_flag("--no-extrinsic", no_extrinsic, "zero the extrinsic reward during training");
    app->add_flag("--sync", sync, "single-threaded deterministic actor/learner");
    app->add_flag("--async", async_mode, "threaded actors feeding the learner");
    app->add_flag("--trace", trace, "write per-step trace CSVs");
    app->add_option("--config", config_file, "key=value config file (flags override it)");
    app->add_option("--out", out, "output directory");
    app->add_option("--resume", resume, "checkpoint directory to resume from");
    app->add_option("--omega-ir", omega_ir, "intrinsic reward coefficient");
    app->add_option("--entropy-coef", entropy, "entropy regularization coefficient");
    app->add_option("--lr", lr, "learning rate");
    app->add_option("--batch-size", batch, "unrolls per learner batch");
    app->add_option("--unroll-length", unroll, "transitions per unroll");
    app->add_option("--num-workers", workers, "actor threads (async mode)");
    app->add_option("--stop-return", stop_return, "stop once the rolling return reaches this");
    app->add_flag("--quiet", quiet, "no progress line");
  }

  int apply(ride_config* cfg) const {
    if (!config_file.empty() && ride_config_load(cfg, config_file.c_str()) != RIDE_OK)
      return fail("loading config");
    auto set = [&](const char* key, const std::string& value) {
      if (ride_config_set(cfg, key, value.c_str()) != RIDE_OK) {
        std::fprintf(stderr, "ride: bad --%s: %s\n", key, ride_last_error());
        return false;
      }
      return true;
    };
    if (!task.empty() && !set("task", task)) return 1;
    if (!method.empty() && !set("method", method)) return 1;
    if (total_frames > 0 && !set("total_frames", std::to_string(total_frames))) return 1;
    if (seed > 0 && !set("seed", std::to_string(seed))) return 1;
    if (singleton >= 0 && !set("singleton_seed", std::to_string(singleton))) return 1;
    if (no_extrinsic && !set("no_extrinsic", "1")) return 1;
    if (sync && !set("sync", "1")) return 1;
    if (async_mode && !set("sync", "0")) return 1;
    if (trace && !set("trace", "1")) return 1;
    if (omega_ir > -2 && !set("omega_ir", std::to_string(omega_ir))) return 1;
    if (entropy > -2 && !set("entropy_coef", std::to_string(entropy))) return 1;
    if (lr > 0 && !set("learning_rate", std::to_string(lr))) return 1;
    if (batch > 0 && !set("batch_size", std::to_string(batch))) return 1;
    if (unroll > 0 && !set("unroll_length", std::to_string(unroll))) return 1;
    if (workers > 0 && !set("num_workers", std::to_string(workers))) return 1;
    if (stop_return >= 0 && !set("stop_return", std::to_string(stop_return))) return 1;
    return 0;
  }
};

int run_one_training(const TrainArgs& args, uint64_t seed_override, const std::string& out_dir) {
  ConfigHandle cfg;
  if (!cfg.ptr) return 1;
  if (int rc = args.apply(cfg.ptr); rc != 0) return rc;
  if (seed_override > 0 &&
      ride_config_set(cfg.ptr, "seed", std::to_string(seed_override).c_str()) != RIDE_OK)
    return fail("setting seed");
  const std::string dir = default_out_dir(cfg.ptr, out_dir);
  std::printf("training -> %s\n", dir.c_str());
  const ride_status st =
      ride_train(cfg.ptr, dir.c_str(), args.resume.empty() ? nullptr : args.resume.c_str(),
                 args.quiet ? nullptr : progress_printer, nullptr);
  if (!args.quiet) std::printf("\n");
  if (st != RIDE_OK) return fail("training");
  std::printf("done: %s\n", dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIDE exploration workbench"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "train one run");
  TrainArgs train_args;
  train_args.add_options(train);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "train several seeds back to back");
  TrainArgs sweep_args;
  int sweep_seeds = 5;
  sweep_args.add_options(sweep);
  sweep->add_option("--seeds", sweep_seeds, "number of consecutive seeds");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "evaluate a checkpoint");
  std::string eval_checkpoint, eval_task, eval_colors, eval_traces;
  int eval_episodes = 100, eval_budget = 0;
  uint64_t eval_seed = 10'000;
  eval->add_option("--checkpoint", eval_checkpoint, "checkpoint directory")->required();
  eval->add_option("--task", eval_task, "override the checkpoint's task");
  eval->add_option("--episodes", eval_episodes, "episodes to run");
  eval->add_option("--seed", eval_seed, "evaluation seed");
  eval->add_option("--colors", eval_colors, "train|held-out (colorgen tasks)");
  eval->add_option("--traces-out", eval_traces, "write per-step trace CSVs here");
  eval->add_option("--step-budget", eval_budget, "override the episode step limit");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "aggregate trace/log CSVs");
  std::string an_mode, an_traces, an_out, an_groups = "doors", an_layout;
  int an_window = 100, an_width = 0, an_height = 0;
  analyze->add_option("mode", an_mode, "table|visitmap|rewardmap|distinct|decay")->required();
  analyze->add_option("--traces", an_traces, "input directory of CSVs")->required();
  analyze->add_option("--out", an_out, "output directory")->required();
  analyze->add_option("--groups", an_groups, "action grouping: doors|objects");
  analyze->add_option("--window", an_window, "smoothing window");
  analyze->add_option("--layout", an_layout, "text map fixing the grid dimensions");
  analyze->add_option("--width", an_width, "grid width");
  analyze->add_option("--height", an_height, "grid height");

  // map
  auto* map_cmd = app.add_subcommand("map", "dump a generated layout as text");
  std::string map_task = "multiroom-n7-s4";
  uint64_t map_seed = 1;
  int64_t map_singleton = -1;
  map_cmd->add_option("--task", map_task, "task name");
  map_cmd->add_option("--seed", map_seed, "generation seed");
  map_cmd->add_option("--singleton", map_singleton, "singleton layout seed");

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) return run_one_training(train_args, 0, train_args.out);

  if (sweep->parsed()) {
    uint64_t base = sweep_args.seed > 0 ? sweep_args.seed : 1;
    for (int i = 0; i < sweep_seeds; i++) {
      const uint64_t seed = base + static_cast<uint64_t>(i);
      std::string out = sweep_args.out;
      if (!out.empty()) out += "-seed" + std::to_string(seed);
      if (int rc = run_one_training(sweep_args, seed, out); rc != 0) return rc;
    }
    return 0;
  }

  if (eval->parsed()) {
    double mean = 0, stddev = 0;
    const ride_status st = ride_evaluate(
        eval_checkpoint.c_str(), eval_task.empty() ? nullptr : eval_task.c_str(), eval_episodes,
        eval_seed, eval_colors.empty() ? nullptr : eval_colors.c_str(),
        eval_traces.empty() ? nullptr : eval_traces.c_str(), eval_budget, &mean, &stddev);
    if (st != RIDE_OK) return fail("evaluate");
    std::printf("episodes %d  mean_return %.4f  std %.4f\n", eval_episodes, mean, stddev);
    return 0;
  }

  if (analyze->parsed()) {
    std::string options = "groups=" + an_groups + ";window=" + std::to_string(an_window);
    if (!an_layout.empty()) options += ";layout=" + an_layout;
    if (an_width > 0) options += ";width=" + std::to_string(an_width);
    if (an_height > 0) options += ";height=" + std::to_string(an_height);
    if (ride_analyze(an_mode.c_str(), an_traces.c_str(), an_out.c_str(), options.c_str()) !=
        RIDE_OK)
      return fail("analyze");
    std::printf("wrote %s outputs to %s\n", an_mode.c_str(), an_out.c_str());
    return 0;
  }

  if (map_cmd->parsed()) {
    ride_env* env = ride_env_new(map_task.c_str(), map_singleton);
    if (!env) return fail("creating env");
    if (ride_env_reset(env, map_seed) != RIDE_OK) {
      ride_env_free(env);
      return fail("reset");
    }
    std::vector<char> buf(65536);
    ride_env_render(env, buf.data(), buf.size());
    std::fputs(buf.data(), stdout);
    ride_env_free(env);
    return 0;
  }
  return 0;
}
