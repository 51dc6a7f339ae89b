#include "ride/harness/run.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "ride/analysis/trace.hpp"

namespace fs = std::filesystem;

namespace ride::harness {

namespace {

constexpr const char* kLearnerHeader = "frames,loss_rl,loss_fw,loss_inv,entropy,grad_norm,mean_ri";

void fill_count_rewards(agent::RolloutBatch& batch, intrinsic::CountStore& global) {
  for (size_t i = 0; i < batch.obs_hash.size(); i++)
    batch.reward_int[i] = static_cast<float>(intrinsic::count_reward(global.global_visit(batch.obs_hash[i])));
}

void combine_batch(agent::RolloutBatch& batch, const intrinsic::RewardConfig& rc) {
  for (size_t i = 0; i < batch.reward.size(); i++)
    batch.reward[i] = static_cast<float>(
        intrinsic::combine_rewards(batch.reward_ext[i], batch.reward_int[i], rc));
}

void write_counts(const intrinsic::CountStore& counts, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write counts: " + path);
  auto put_u64 = [&](uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; i++) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<char*>(b), 8);
  };
  put_u64(counts.global.size());
  // Sorted for a deterministic file.
  std::vector<std::pair<uint64_t, uint64_t>> items(counts.global.begin(), counts.global.end());
  std::sort(items.begin(), items.end());
  for (const auto& [k, v] : items) {
    put_u64(k);
    put_u64(v);
  }
}

intrinsic::CountStore read_counts(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read counts: " + path);
  auto get_u64 = [&] {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
  };
  intrinsic::CountStore counts;
  const uint64_t n = get_u64();
  for (uint64_t i = 0; i < n && in; i++) {
    const uint64_t k = get_u64();
    counts.global[k] = get_u64();
  }
  if (!in) throw IoError("truncated counts file: " + path);
  return counts;
}

// A bounded batch queue for the async actor/learner handoff.
class BatchQueue {
 public:
  explicit BatchQueue(size_t cap) : cap_(cap) {}

  void push(agent::RolloutBatch&& b) {
    std::unique_lock<std::mutex> lock(mu_);
    cv_push_.wait(lock, [&] { return q_.size() < cap_ || closed_; });
    if (closed_) return;
    q_.push_back(std::move(b));
    cv_pop_.notify_one();
  }

  bool pop(agent::RolloutBatch& out) {
    std::unique_lock<std::mutex> lock(mu_);
    cv_pop_.wait(lock, [&] { return !q_.empty() || closed_; });
    if (q_.empty()) return false;
    out = std::move(q_.front());
    q_.pop_front();
    cv_push_.notify_one();
    return true;
  }

  void close() {
    std::lock_guard<std::mutex> lock(mu_);
    closed_ = true;
    cv_pop_.notify_all();
    cv_push_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_push_, cv_pop_;
  std::deque<agent::RolloutBatch> q_;
  size_t cap_;
  bool closed_ = false;
};

int step_budget_for(const ExperimentConfig& cfg) {
  // No-extrinsic exploration analyses run with a fixed 200-step episode cap.
  return cfg.no_extrinsic ? 200 : 0;
}

}  // namespace

std::string log_root() {
  if (const char* env = std::getenv("RIDE_LOG_DIR"); env && *env) return env;
  return "runs";
}

void save_checkpoint(const agent::AgentModel& model, const ExperimentConfig& cfg, uint64_t frames,
                     const intrinsic::CountStore& counts, const std::string& dir) {
  fs::create_directories(dir);
  cfg.save_file(dir + "/config.cfg");
  {
    std::ofstream meta(dir + "/meta.txt");
    if (!meta) throw IoError("cannot write checkpoint meta: " + dir);
    meta << "frames = " << frames << "\n";
  }
  nn::save_param_store(model.policy_ps, dir + "/policy.ckpt");
  if (intrinsic::method_uses_dynamics(model.method)) {
    nn::save_param_store(model.embedding_ps, dir + "/embedding.ckpt");
    nn::save_param_store(model.forward_ps, dir + "/forward.ckpt");
    nn::save_param_store(model.inverse_ps, dir + "/inverse.ckpt");
  }
  if (model.method == intrinsic::Method::rnd) {
    nn::save_param_store(model.rnd.target, dir + "/rnd_target.ckpt");
    nn::save_param_store(model.rnd.predictor, dir + "/rnd_predictor.ckpt");
  }
  if (model.method == intrinsic::Method::count) write_counts(counts, dir + "/counts.bin");
}

Checkpoint load_checkpoint(const std::string& dir) {
  Checkpoint ck;
  ck.config = ExperimentConfig::load_file(dir + "/config.cfg");
  {
    std::ifstream meta(dir + "/meta.txt");
    std::string key, eq;
    if (!(meta >> key >> eq >> ck.frames) || key != "frames")
      throw IoError("bad checkpoint meta in " + dir);
  }
  ck.model.init(ck.config.view_size, ck.config.method_enum(), ck.config.seed);
  nn::load_param_store(ck.model.policy_ps, dir + "/policy.ckpt");
  if (intrinsic::method_uses_dynamics(ck.model.method)) {
    nn::load_param_store(ck.model.embedding_ps, dir + "/embedding.ckpt");
    nn::load_param_store(ck.model.forward_ps, dir + "/forward.ckpt");
    nn::load_param_store(ck.model.inverse_ps, dir + "/inverse.ckpt");
  }
  if (ck.model.method == intrinsic::Method::rnd) {
    nn::load_param_store(ck.model.rnd.target, dir + "/rnd_target.ckpt");
    nn::load_param_store(ck.model.rnd.predictor, dir + "/rnd_predictor.ckpt");
  }
  if (ck.model.method == intrinsic::Method::count && fs::exists(dir + "/counts.bin"))
    ck.counts = read_counts(dir + "/counts.bin");
  return ck;
}

TrainResult run_training(const ExperimentConfig& cfg, const std::string& out_dir,
                         ProgressFn progress, const std::string& resume_from) {
  const grid::TaskSpec spec = cfg.task_spec();
  const intrinsic::RewardConfig reward_cfg = cfg.reward_config();
  const nn::OptimConfig optim = cfg.optim_config();
  const agent::LossWeights weights = cfg.loss_weights();
  const int budget = step_budget_for(cfg);

  fs::create_directories(out_dir);
  fs::create_directories(out_dir + "/checkpoints");
  if (cfg.trace) fs::create_directories(out_dir + "/traces");
  cfg.save_file(out_dir + "/config.cfg");

  agent::AgentModel model;
  model.init(cfg.view_size, reward_cfg.method, cfg.seed);
  intrinsic::CountStore global_counts;
  uint64_t start_frames = 0;
  if (!resume_from.empty()) {
    Checkpoint ck = load_checkpoint(resume_from);
    const std::string d = cfg.diff(ck.config);
    if (!d.empty())
      throw ConfigError("refusing to resume from " + resume_from + ", config differs:\n" + d);
    model = std::move(ck.model);
    global_counts = std::move(ck.counts);
    start_frames = ck.frames;
  }

  std::ofstream runlog_file(out_dir + "/runlog.csv");
  if (!runlog_file) throw IoError("cannot write run log in " + out_dir);
  RunLog runlog(&runlog_file);
  std::ofstream learner_csv(out_dir + "/learner.csv");
  learner_csv << kLearnerHeader << "\n";
  learner_csv.precision(8);

  std::atomic<uint64_t> frames{0};
  std::atomic<bool> stop{false};

  auto episode_sink = [&](const agent::EpisodeResult& e) {
    runlog.append(e.frames_at_end, e.return_ext, e.mean_ri);
    if (cfg.stop_return > 0 && runlog.episodes() >= 100 && runlog.rolling() >= cfg.stop_return)
      stop.store(true, std::memory_order_relaxed);
  };

  const auto done_by_frames = [&] { return start_frames + frames.load() >= cfg.total_frames; };
  uint64_t next_checkpoint =
      cfg.checkpoint_interval > 0 ? start_frames + cfg.checkpoint_interval : 0;
  double last_mean_ri = 0;

  auto after_step = [&](const agent::LearnerStats& stats, uint64_t frames_now) {
    learner_csv << frames_now << ',' << stats.loss_rl << ',' << stats.loss_fw << ','
                << stats.loss_inv << ',' << stats.entropy << ',' << stats.grad_norm << ','
                << stats.mean_ri << "\n";
    last_mean_ri = stats.mean_ri;
    if (next_checkpoint > 0 && frames_now >= next_checkpoint) {
      save_checkpoint(model, cfg, frames_now, global_counts,
                      out_dir + "/checkpoints/frames_" + std::to_string(frames_now));
      while (next_checkpoint <= frames_now) next_checkpoint += cfg.checkpoint_interval;
    }
    if (progress)
      progress({frames_now, runlog.episodes(), runlog.rolling(), stats.mean_ri});
  };

  if (cfg.sync) {
    agent::RolloutWorker worker(spec, reward_cfg, cfg.batch_size, cfg.unroll_length, cfg.seed, 0,
                                budget);
    worker.set_frame_counter(&frames, start_frames);
    worker.set_episode_sink(episode_sink);
    std::ofstream trace_file;
    if (cfg.trace) {
      trace_file.open(out_dir + "/traces/train.csv");
      analysis::write_trace_header(trace_file);
      worker.set_trace_sink(
          [&](const analysis::TraceRecord& r) { analysis::write_trace_record(trace_file, r); });
    }

    agent::RolloutBatch batch;
    while (!done_by_frames() && !stop.load(std::memory_order_relaxed)) {
      worker.collect(model, batch);
      if (reward_cfg.method == intrinsic::Method::count) fill_count_rewards(batch, global_counts);
      combine_batch(batch, reward_cfg);
      const uint64_t now = start_frames + frames.load();
      const auto stats = agent::learner_step(model, batch, weights, optim, reward_cfg.entropy_coef,
                                             cfg.gamma, cfg.rho_bar, cfg.c_bar, cfg.baseline_coef,
                                             now);
      after_step(stats, now);
    }
  } else {
    // Async actor/learner: each worker owns a full batch of envs and fills a
    // bounded queue; the single learner consumes and publishes snapshots.
    BatchQueue queue(static_cast<size_t>(2) * cfg.num_workers);
    std::mutex snap_mu;
    auto snapshot = std::make_shared<const agent::AgentModel>(model);
    auto publish = [&](const agent::AgentModel& m) {
      auto s = std::make_shared<const agent::AgentModel>(m);
      std::lock_guard<std::mutex> lock(snap_mu);
      snapshot = std::move(s);
    };
    auto latest = [&] {
      std::lock_guard<std::mutex> lock(snap_mu);
      return snapshot;
    };

    std::vector<std::unique_ptr<std::ofstream>> trace_files;
    std::vector<std::thread> threads;
    std::atomic<int> live_workers{cfg.num_workers};
    for (int w = 0; w < cfg.num_workers; w++) {
      std::ofstream* tf = nullptr;
      if (cfg.trace) {
        trace_files.push_back(std::make_unique<std::ofstream>(out_dir + "/traces/train_w" +
                                                              std::to_string(w) + ".csv"));
        analysis::write_trace_header(*trace_files.back());
        tf = trace_files.back().get();
      }
      threads.emplace_back([&, w, tf] {
        agent::RolloutWorker worker(spec, reward_cfg, cfg.batch_size, cfg.unroll_length, cfg.seed,
                                    w * cfg.batch_size, budget);
        worker.set_frame_counter(&frames, start_frames);
        worker.set_episode_sink(episode_sink);
        std::mutex trace_mu;
        if (tf)
          worker.set_trace_sink([&, tf](const analysis::TraceRecord& r) {
            std::lock_guard<std::mutex> lock(trace_mu);
            analysis::write_trace_record(*tf, r);
          });
        while (!done_by_frames() && !stop.load(std::memory_order_relaxed)) {
          agent::RolloutBatch batch;
          auto snap = latest();
          worker.collect(*snap, batch);
          queue.push(std::move(batch));
        }
        if (live_workers.fetch_sub(1) == 1) queue.close();
      });
    }

    uint64_t consumed = start_frames;
    agent::RolloutBatch batch;
    while (queue.pop(batch)) {
      if (reward_cfg.method == intrinsic::Method::count) fill_count_rewards(batch, global_counts);
      combine_batch(batch, reward_cfg);
      const auto stats = agent::learner_step(model, batch, weights, optim, reward_cfg.entropy_coef,
                                             cfg.gamma, cfg.rho_bar, cfg.c_bar, cfg.baseline_coef,
                                             consumed);
      consumed += static_cast<uint64_t>(batch.steps) * batch.batch;
      publish(model);
      after_step(stats, consumed);
    }
    for (auto& t : threads) t.join();
  }

  TrainResult result;
  result.frames = start_frames + frames.load();
  result.episodes = runlog.episodes();
  result.final_rolling_return = runlog.rolling();
  result.runlog_path = out_dir + "/runlog.csv";
  result.checkpoint_dir = out_dir + "/checkpoints/final";
  save_checkpoint(model, cfg, result.frames, global_counts, result.checkpoint_dir);
  return result;
}

EvalResult evaluate_model(const agent::AgentModel* model, const intrinsic::RewardConfig& reward,
                          grid::TaskSpec spec, const EvalOptions& opts, agent::TraceSink trace) {
  RIDE_REQUIRE(opts.episodes >= 1, "evaluation needs at least one episode");
  if (!opts.color_mode.empty()) {
    if (!spec.colorgen)
      throw ConfigError("--colors applies only to colorgen tasks");
    if (opts.color_mode == "held-out")
      spec.color_set = grid::kColorgenHeldOutSet;
    else if (opts.color_mode == "train")
      spec.color_set = grid::kColorgenTrainSet;
    else
      throw ConfigError("unknown color mode '" + opts.color_mode + "'");
  }

  grid::Env env(spec);
  if (opts.step_budget > 0) env.set_step_budget(opts.step_budget);
  Rng rng(mix_seed(opts.seed, 0xeaa1ull));
  const int A = grid::kNumActions;
  const int H = model ? model->policy.hidden : 0;
  const int E = model ? model->embed_dim() : 0;
  const size_t cells = static_cast<size_t>(spec.view_size) * spec.view_size * 3;
  const bool use_dyn = model && intrinsic::method_uses_dynamics(reward.method);

  std::vector<float> h(H, 0.f), c(H, 0.f);
  std::vector<float> logits(A), probs(A);
  std::vector<float> phi_prev(E), phi_next(E), fw_pred(E);
  nn::PolicyNet::Cache pol_cache;
  dyn::EmbeddingNet::Cache emb_cache;
  intrinsic::CountStore counts;

  double sum = 0, sum_sq = 0;
  for (int e = 0; e < opts.episodes; e++) {
    env.reset(mix_seed(opts.seed, static_cast<uint64_t>(e)));
    counts.reset_episode();
    std::fill(h.begin(), h.end(), 0.f);
    std::fill(c.begin(), c.end(), 0.f);
    if (use_dyn)
      model->embedding.forward(model->embedding_ps, env.obs().data.data(), 1, emb_cache,
                               phi_prev.data());
    double ret = 0;
    while (!env.terminated()) {
      int a;
      if (model) {
        std::vector<float> value(1);
        model->policy.forward(model->policy_ps, env.obs().data.data(), nullptr, 1, 1, h.data(),
                              c.data(), pol_cache, logits.data(), value.data(), h.data(), c.data());
        nn::softmax_row(logits.data(), A, probs.data());
        double u = rng.uniform(), acc = 0;
        a = A - 1;
        for (int k = 0; k < A; k++) {
          acc += probs[k];
          if (u < acc) {
            a = k;
            break;
          }
        }
      } else {
        a = static_cast<int>(rng.below(A));
      }

      const auto res = env.step(static_cast<grid::Action>(a));
      ret += res.reward;

      if (trace) {
        analysis::TraceRecord row;
        row.episode = static_cast<uint64_t>(e);
        row.step = env.state().step_count;
        row.x = env.state().agent.x;
        row.y = env.state().agent.y;
        row.dir = static_cast<int>(env.state().agent.dir);
        row.action = a;
        row.event = res.event;
        row.room = env.room_of(row.x, row.y);
        row.re = res.reward;
        row.obs_hash = env.obs_hash();
        const uint64_t n_ep = counts.episodic_visit(row.obs_hash);
        double ri = 0;
        if (model) {
          if (use_dyn)
            model->embedding.forward(model->embedding_ps, env.obs().data.data(), 1, emb_cache,
                                     phi_next.data());
          switch (reward.method) {
            case intrinsic::Method::ride:
              ri = intrinsic::ride_reward(phi_prev.data(), phi_next.data(), E, n_ep);
              break;
            case intrinsic::Method::icm: {
              dyn::ForwardModel::Cache fw_cache;
              model->forward_model.forward(model->forward_ps, phi_prev.data(), &a, 1, fw_cache,
                                           fw_pred.data());
              ri = intrinsic::icm_reward(fw_pred.data(), phi_next.data(), E);
              break;
            }
            case intrinsic::Method::rnd:
              ri = intrinsic::rnd_reward(model->rnd, env.obs().data.data());
              break;
            case intrinsic::Method::count:
              ri = intrinsic::count_reward(counts.global_visit(row.obs_hash));
              break;
            case intrinsic::Method::only_episodic:
            case intrinsic::Method::no_episodic:
              ri = intrinsic::ablation_reward(reward.method, phi_prev.data(), phi_next.data(), E,
                                              n_ep);
              break;
            case intrinsic::Method::vanilla:
              break;
          }
          if (use_dyn) phi_prev.swap(phi_next);
        }
        row.ri = ri;
        trace(row);
      } else if (use_dyn) {
        model->embedding.forward(model->embedding_ps, env.obs().data.data(), 1, emb_cache,
                                 phi_next.data());
        phi_prev.swap(phi_next);
      }
      (void)cells;
    }
    sum += ret;
    sum_sq += ret * ret;
  }

  EvalResult res;
  res.episodes = opts.episodes;
  res.mean_return = sum / opts.episodes;
  const double var = std::max(0.0, sum_sq / opts.episodes - res.mean_return * res.mean_return);
  res.std_return = std::sqrt(var);
  return res;
}

EvalResult evaluate_checkpoint(const std::string& checkpoint_dir, const std::string& task_override,
                               const EvalOptions& opts) {
  Checkpoint ck = load_checkpoint(checkpoint_dir);
  grid::TaskSpec spec =
      task_override.empty() ? ck.config.task_spec() : grid::TaskSpec::parse(task_override);
  spec.view_size = ck.config.view_size;
  const intrinsic::RewardConfig rc = ck.config.reward_config();

  std::ofstream trace_file;
  agent::TraceSink sink;
  if (!opts.traces_out.empty()) {
    fs::create_directories(opts.traces_out);
    trace_file.open(opts.traces_out + "/eval.csv");
    if (!trace_file) throw IoError("cannot write traces in " + opts.traces_out);
    analysis::write_trace_header(trace_file);
    sink = [&](const analysis::TraceRecord& r) { analysis::write_trace_record(trace_file, r); };
  }
  return evaluate_model(&ck.model, rc, spec, opts, sink);
}

}  // namespace ride::harness
