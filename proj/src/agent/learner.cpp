#include "ride/agent/learner.hpp"

#include "ride/agent/rl_loss.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

namespace ride::agent {

LearnerStats rl_loss_grads(const float* logits, const float* values, const RolloutBatch& batch,
                           const VtraceResult& vt, double entropy_coef, double baseline_coef,
                           double omega_pi, float* dlogits, float* dvalues) {
  const RlLossParts parts =
      rl_loss_grads_t(logits, values, batch.actions.data(), batch.steps, batch.batch,
                      batch.n_actions, vt, entropy_coef, baseline_coef, omega_pi, dlogits, dvalues);
  LearnerStats stats;
  stats.loss_pg = parts.pg;
  stats.loss_baseline = parts.baseline;
  stats.loss_entropy = parts.entropy_term;
  stats.loss_rl = parts.total();
  stats.entropy = parts.mean_entropy;
  return stats;
}

LearnerStats learner_step(AgentModel& model, const RolloutBatch& batch, const LossWeights& weights,
                          const nn::OptimConfig& optim, double entropy_coef, double gamma,
                          double rho_bar, double c_bar, double baseline_coef,
                          uint64_t frames_done) {
  const int T = batch.steps, B = batch.batch, A = batch.n_actions;
  const int rows = (T + 1) * B;

  // Recompute policy outputs over the unroll, bootstrap step included.
  nn::PolicyNet::Cache cache;
  std::vector<float> logits(static_cast<size_t>(rows) * A);
  std::vector<float> values(rows);
  model.policy.forward(model.policy_ps, batch.obs.data(), batch.done.data(), T + 1, B,
                       batch.init_h.data(), batch.init_c.data(), cache, logits.data(),
                       values.data(), nullptr, nullptr);

  std::vector<double> rewards(batch.reward.begin(), batch.reward.end());
  std::vector<double> values_d(values.begin(), values.end());
  VtraceResult vt = vtrace_targets(batch.behavior_logits.data(), logits.data(),
                                   batch.actions.data(), rewards.data(), batch.done.data(),
                                   values_d.data(), T, B, A, gamma, rho_bar, c_bar);

  std::vector<float> dlogits(static_cast<size_t>(rows) * A, 0.f);
  std::vector<float> dvalues(rows, 0.f);
  LearnerStats stats = rl_loss_grads(logits.data(), values.data(), batch, vt, entropy_coef,
                                     baseline_coef, weights.omega_pi, dlogits.data(),
                                     dvalues.data());
  if (!std::isfinite(stats.loss_rl)) {
    std::ostringstream msg;
    msg << "non-finite RL loss: pg=" << stats.loss_pg << " baseline=" << stats.loss_baseline
        << " entropy=" << stats.loss_entropy;
    throw NumericError(msg.str());
  }

  if (weights.omega_pi != 0.0) {
    model.policy.backward(model.policy_ps, cache, dlogits.data(), dvalues.data());
    stats.grad_norm = model.policy_ps.grad_norm();
    nn::rmsprop_step(model.policy_ps, optim, frames_done);
  } else {
    model.policy_ps.zero_grads();
  }

  // Dynamics losses; gradients reach the embedding through both models but
  // never through the RL loss above.
  if (intrinsic::method_uses_dynamics(model.method) &&
      (weights.omega_fw != 0.0 || weights.omega_inv != 0.0)) {
    const int E = model.embed_dim();
    const int n = T * B;
    dyn::EmbeddingNet::Cache emb_cache;
    std::vector<float> phi(static_cast<size_t>(rows) * E);
    model.embedding.forward(model.embedding_ps, batch.obs.data(), rows, emb_cache, phi.data());
    const float* phi_t = phi.data();
    const float* phi_next = phi.data() + static_cast<size_t>(B) * E;
    std::vector<float> dphi(static_cast<size_t>(rows) * E, 0.f);
    float* dphi_t = dphi.data();
    float* dphi_next = dphi.data() + static_cast<size_t>(B) * E;

    if (weights.omega_fw != 0.0) {
      dyn::ForwardModel::Cache fw_cache;
      std::vector<float> pred(static_cast<size_t>(n) * E);
      model.forward_model.forward(model.forward_ps, phi_t, batch.actions.data(), n, fw_cache,
                                  pred.data());
      std::vector<float> dpred(pred.size(), 0.f);
      stats.loss_fw = dyn::forward_dynamics_loss(pred.data(), phi_next, n, E, dpred.data(),
                                                 static_cast<float*>(nullptr));
      const float wf = static_cast<float>(weights.omega_fw);
      for (auto& g : dpred) g *= wf;
      // Target-side gradient of the squared error, scaled the same way.
      for (int i = 0; i < n * E; i++)
        dphi_next[i] += -2.0f * wf * (pred[i] - phi_next[i]) / static_cast<float>(n);
      model.forward_model.backward(model.forward_ps, fw_cache, dpred.data(), dphi_t);
    }

    if (weights.omega_inv != 0.0) {
      dyn::InverseModel::Cache inv_cache;
      std::vector<float> inv_logits(static_cast<size_t>(n) * A);
      model.inverse_model.forward(model.inverse_ps, phi_t, phi_next, n, inv_cache,
                                  inv_logits.data());
      std::vector<float> dinv(inv_logits.size(), 0.f);
      stats.loss_inv =
          nn::softmax_xent(inv_logits.data(), batch.actions.data(), n, A, dinv.data());
      const float wi = static_cast<float>(weights.omega_inv);
      for (auto& g : dinv) g *= wi;
      model.inverse_model.backward(model.inverse_ps, inv_cache, dinv.data(), dphi_t, dphi_next);
    }

    model.embedding.backward(model.embedding_ps, emb_cache, dphi.data());
    nn::rmsprop_step(model.embedding_ps, optim, frames_done);
    if (weights.omega_fw != 0.0) nn::rmsprop_step(model.forward_ps, optim, frames_done);
    if (weights.omega_inv != 0.0) nn::rmsprop_step(model.inverse_ps, optim, frames_done);
  }

  // RND predictor distillation on the visited next-states.
  if (model.method == intrinsic::Method::rnd) {
    const int n = T * B;
    const int8_t* next_obs = batch.obs.data() + static_cast<size_t>(B) * batch.obs_cells();
    const int D = model.rnd.net.out_dim;
    intrinsic::RndNet::Cache tgt_cache, pred_cache;
    std::vector<float> tgt(static_cast<size_t>(n) * D), pred(static_cast<size_t>(n) * D);
    model.rnd.net.forward(model.rnd.target, next_obs, n, tgt_cache, tgt.data());
    model.rnd.net.forward(model.rnd.predictor, next_obs, n, pred_cache, pred.data());
    std::vector<float> dpred(pred.size(), 0.f);
    stats.loss_rnd = dyn::forward_dynamics_loss(pred.data(), tgt.data(), n, D, dpred.data(),
                                                static_cast<float*>(nullptr));
    model.rnd.net.backward(model.rnd.predictor, pred_cache, dpred.data());
    nn::rmsprop_step(model.rnd.predictor, optim, frames_done);
  }

  double ri = 0;
  for (float r : batch.reward_int) ri += r;
  stats.mean_ri = ri / (static_cast<double>(T) * B);
  return stats;
}

}  // namespace ride::agent
