#pragma once

#include "ride/agent/model.hpp"
#include "ride/agent/rollout.hpp"
#include "ride/agent/vtrace.hpp"
#include "ride/nn/optim.hpp"

namespace ride::agent {

struct LossWeights {
  double omega_pi = 1.0;
  double omega_fw = 10.0;
  double omega_inv = 0.1;
};

struct LearnerStats {
  double loss_rl = 0, loss_pg = 0, loss_baseline = 0, loss_entropy = 0;
  double loss_fw = 0, loss_inv = 0, loss_rnd = 0;
  double entropy = 0;      // mean per-step policy entropy
  double grad_norm = 0;    // policy gradient norm, before clipping
  double mean_ri = 0;      // mean raw intrinsic reward in the batch
};

// Policy-gradient + baseline + entropy loss on top of V-trace targets.
// Returns the loss pieces and writes the logits/value gradients (already
// scaled by omega_pi); advantages and targets are treated as constants.
LearnerStats rl_loss_grads(const float* logits, const float* values, const RolloutBatch& batch,
                           const VtraceResult& vt, double entropy_coef, double baseline_coef,
                           double omega_pi, float* dlogits, float* dvalues);

// One optimization step of the joint objective
//   omega_pi L_RL + omega_fw L_fw + omega_inv L_inv
// on a finished batch (batch.reward must hold the combined rewards).
// Each network's store is clipped and updated separately; the RL loss only
// ever touches the policy parameters.
LearnerStats learner_step(AgentModel& model, const RolloutBatch& batch, const LossWeights& weights,
                          const nn::OptimConfig& optim, double entropy_coef, double gamma,
                          double rho_bar, double c_bar, double baseline_coef,
                          uint64_t frames_done);

}  // namespace ride::agent
