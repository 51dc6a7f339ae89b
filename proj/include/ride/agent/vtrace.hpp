#pragma once

#include <cstdint>
#include <vector>

#include "ride/core/error.hpp"

namespace ride::agent {

struct VtraceResult {
  std::vector<double> vs;      // T x B value targets
  std::vector<double> pg_adv;  // T x B policy-gradient advantages
};

// Core V-trace recursion on precomputed log importance ratios.
//   rho_t = min(rho_bar, pi/mu),  c_t = min(c_bar, pi/mu)
//   delta_t = rho_t (r_t + gamma_t V_{t+1} - V_t)
//   v_t = V_t + delta_t + gamma_t c_t (v_{t+1} - V_{t+1})
//   adv_t = rho_t (r_t + gamma_t v_{t+1} - V_t)
// with gamma_t = gamma * (1 - done_t), so bootstrapping truncates at episode
// boundaries. All arrays are time-major (T x B); values has T+1 rows, the
// last being the bootstrap.
VtraceResult vtrace_from_log_ratios(const double* log_ratios, const double* rewards,
                                    const uint8_t* done, const double* values, int steps,
                                    int batch, double gamma, double rho_bar, double c_bar);

// Convenience wrapper computing the ratios from raw behavior/target logits
// over `n_actions` and the taken actions. Throws if a taken action has zero
// behavior probability.
VtraceResult vtrace_targets(const float* behavior_logits, const float* target_logits,
                            const int* actions, const double* rewards, const uint8_t* done,
                            const double* values, int steps, int batch, int n_actions,
                            double gamma, double rho_bar, double c_bar);

}  // namespace ride::agent
