#include "ride/agent/worker.hpp"

#include <cstring>

namespace ride::agent {

using intrinsic::Method;

RolloutWorker::RolloutWorker(const grid::TaskSpec& task, const intrinsic::RewardConfig& reward,
                             int n_envs, int unroll, uint64_t run_seed, int env_index_base,
                             int step_budget)
    : task_(task),
      reward_(reward),
      n_envs_(n_envs),
      unroll_(unroll),
      run_seed_(run_seed),
      env_base_(env_index_base),
      counts_(n_envs),
      env_episode_(n_envs, 0),
      episode_acc_(n_envs),
      action_rng_(mix_seed(run_seed, 0xac7ull, env_index_base)) {
  envs_.reserve(n_envs);
  for (int b = 0; b < n_envs; b++) {
    envs_.emplace_back(task_);
    if (step_budget > 0) envs_.back().set_step_budget(step_budget);
  }
}

void RolloutWorker::reset_env(int b, const AgentModel& model) {
  const uint64_t seed = mix_seed(run_seed_, env_base_ + b, env_episode_[b]);
  env_episode_[b]++;
  envs_[b].reset(seed);
  counts_[b].reset_episode();
  episode_acc_[b] = EpisodeResult{};
  episode_acc_[b].index = episodes_;
  episode_acc_[b].max_room = envs_[b].room_of(envs_[b].state().agent.x, envs_[b].state().agent.y);
  const int H = model.policy.hidden;
  std::fill_n(h_.begin() + static_cast<size_t>(b) * H, H, 0.f);
  std::fill_n(c_.begin() + static_cast<size_t>(b) * H, H, 0.f);
}

void RolloutWorker::collect(const AgentModel& model, RolloutBatch& batch) {
  const int B = n_envs_, T = unroll_;
  const int H = model.policy.hidden;
  const int A = model.n_actions;
  const int E = model.embed_dim();
  const size_t cells = static_cast<size_t>(model.view) * model.view * 3;
  const bool use_dyn = intrinsic::method_uses_dynamics(reward_.method);

  batch.allocate(T, B, model.view, H, A);

  if (first_batch_) {
    h_.assign(static_cast<size_t>(B) * H, 0.f);
    c_.assign(static_cast<size_t>(B) * H, 0.f);
    phi_.assign(static_cast<size_t>(B) * E, 0.f);
    for (int b = 0; b < B; b++) reset_env(b, model);
    first_batch_ = false;
  }

  // Embeddings of the starting observations for this unroll.
  std::vector<int8_t> obs_now(static_cast<size_t>(B) * cells);
  for (int b = 0; b < B; b++)
    std::memcpy(obs_now.data() + b * cells, envs_[b].obs().data.data(), cells);
  dyn::EmbeddingNet::Cache emb_cache;
  if (use_dyn) model.embedding.forward(model.embedding_ps, obs_now.data(), B, emb_cache, phi_.data());

  std::memcpy(batch.init_h.data(), h_.data(), sizeof(float) * h_.size());
  std::memcpy(batch.init_c.data(), c_.data(), sizeof(float) * c_.size());
  std::memcpy(batch.obs_row(0, 0), obs_now.data(), obs_now.size());

  nn::PolicyNet::Cache pol_cache;
  std::vector<float> logits(static_cast<size_t>(B) * A);
  std::vector<float> values(B);
  std::vector<float> probs(A);
  std::vector<float> phi_next(static_cast<size_t>(B) * E);
  std::vector<float> fw_pred(static_cast<size_t>(B) * E);
  std::vector<float> rnd_t(static_cast<size_t>(B) * model.rnd.net.out_dim);
  std::vector<float> rnd_p(static_cast<size_t>(B) * model.rnd.net.out_dim);
  std::vector<int> acts(B);
  std::vector<analysis::TraceRecord> trace_rows(B);

  for (int t = 0; t < T; t++) {
    model.policy.forward(model.policy_ps, batch.obs_row(t, 0), nullptr, 1, B, h_.data(), c_.data(),
                         pol_cache, logits.data(), values.data(), h_.data(), c_.data());
    std::memcpy(batch.behavior_logits.data() + static_cast<size_t>(t) * B * A, logits.data(),
                sizeof(float) * logits.size());

    std::vector<uint8_t> done_now(B, 0);
    for (int b = 0; b < B; b++) {
      nn::softmax_row(logits.data() + static_cast<size_t>(b) * A, A, probs.data());
      double u = action_rng_.uniform();
      int a = A - 1;
      double acc = 0;
      for (int k = 0; k < A; k++) {
        acc += probs[k];
        if (u < acc) {
          a = k;
          break;
        }
      }
      acts[b] = a;

      auto res = envs_[b].step(static_cast<grid::Action>(a));
      frames_++;
      const uint64_t frame_stamp =
          frame_base_ + (shared_frames_ ? shared_frames_->fetch_add(1) + 1 : frames_);
      const size_t i = static_cast<size_t>(t) * B + b;
      batch.actions[i] = a;
      batch.reward_ext[i] = res.reward;
      batch.done[i] = res.done ? 1 : 0;
      done_now[b] = res.done ? 1 : 0;

      auto& acc_ep = episode_acc_[b];
      acc_ep.return_ext += res.reward;
      acc_ep.length++;
      acc_ep.max_room = std::max(acc_ep.max_room,
                                 envs_[b].room_of(envs_[b].state().agent.x, envs_[b].state().agent.y));

      if (trace_sink_) {
        auto& row = trace_rows[b];
        row.episode = acc_ep.index;
        row.step = envs_[b].state().step_count;
        row.x = envs_[b].state().agent.x;
        row.y = envs_[b].state().agent.y;
        row.dir = static_cast<int>(envs_[b].state().agent.dir);
        row.action = a;
        row.event = res.event;
        row.room = envs_[b].room_of(row.x, row.y);
        row.re = res.reward;
      }

      if (res.done) {
        episodes_++;
        auto finished = acc_ep;
        finished.frames_at_end = frame_stamp;
        reset_env(b, model);
        if (episode_sink_) {
          finished.mean_ri = finished.length > 0 ? finished.mean_ri / finished.length : 0.0;
          episode_sink_(finished);
        }
      }
      std::memcpy(batch.obs_row(t + 1, b), envs_[b].obs().data.data(), cells);
      if (res.done) {
        std::fill_n(h_.begin() + static_cast<size_t>(b) * H, H, 0.f);
        std::fill_n(c_.begin() + static_cast<size_t>(b) * H, H, 0.f);
      }
    }

    // Intrinsic rewards for the landed-in states (batch row t+1).
    if (use_dyn)
      model.embedding.forward(model.embedding_ps, batch.obs_row(t + 1, 0), B, emb_cache,
                              phi_next.data());
    if (reward_.method == Method::icm) {
      dyn::ForwardModel::Cache fw_cache;
      model.forward_model.forward(model.forward_ps, phi_.data(), acts.data(), B, fw_cache,
                                  fw_pred.data());
    }
    if (reward_.method == Method::rnd) {
      intrinsic::RndNet::Cache rnd_cache;
      model.rnd.net.forward(model.rnd.target, batch.obs_row(t + 1, 0), B, rnd_cache, rnd_t.data());
      model.rnd.net.forward(model.rnd.predictor, batch.obs_row(t + 1, 0), B, rnd_cache,
                            rnd_p.data());
    }

    for (int b = 0; b < B; b++) {
      const size_t i = static_cast<size_t>(t) * B + b;
      const uint64_t key = grid::hash_bytes(batch.obs_row(t + 1, b), cells);
      batch.obs_hash[i] = key;
      const uint64_t n_ep = counts_[b].episodic_visit(key);

      double ri = 0;
      switch (reward_.method) {
        case Method::ride:
          ri = intrinsic::ride_reward(phi_.data() + static_cast<size_t>(b) * E,
                                      phi_next.data() + static_cast<size_t>(b) * E, E, n_ep);
          break;
        case Method::icm:
          ri = intrinsic::icm_reward(fw_pred.data() + static_cast<size_t>(b) * E,
                                     phi_next.data() + static_cast<size_t>(b) * E, E);
          break;
        case Method::rnd: {
          const int D = model.rnd.net.out_dim;
          double s = 0;
          for (int k = 0; k < D; k++) {
            const double d = static_cast<double>(rnd_p[static_cast<size_t>(b) * D + k]) -
                             static_cast<double>(rnd_t[static_cast<size_t>(b) * D + k]);
            s += d * d;
          }
          ri = s;
          break;
        }
        case Method::only_episodic:
        case Method::no_episodic:
          ri = intrinsic::ablation_reward(reward_.method, phi_.data() + static_cast<size_t>(b) * E,
                                          phi_next.data() + static_cast<size_t>(b) * E, E, n_ep);
          break;
        case Method::count:   // filled by the learner from the global table
        case Method::vanilla:
          ri = 0;
          break;
      }
      batch.reward_int[i] = static_cast<float>(ri);
      episode_acc_[b].mean_ri += done_now[b] ? 0.0 : ri;
      if (trace_sink_) {
        trace_rows[b].ri = ri;
        trace_rows[b].obs_hash = key;
        trace_sink_(trace_rows[b]);
      }
    }
    if (use_dyn) phi_.swap(phi_next);
  }
}

}  // namespace ride::agent
