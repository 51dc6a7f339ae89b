#include "ride/agent/vtrace.hpp"

#include <algorithm>
#include <cmath>

#include "ride/nn/ops.hpp"

namespace ride::agent {

VtraceResult vtrace_from_log_ratios(const double* log_ratios, const double* rewards,
                                    const uint8_t* done, const double* values, int steps,
                                    int batch, double gamma, double rho_bar, double c_bar) {
  VtraceResult out;
  out.vs.assign(static_cast<size_t>(steps) * batch, 0.0);
  out.pg_adv.assign(static_cast<size_t>(steps) * batch, 0.0);

  for (int b = 0; b < batch; b++) {
    double v_next = values[static_cast<size_t>(steps) * batch + b];  // v_{t+1}, starts at V_T
    for (int t = steps - 1; t >= 0; t--) {
      const size_t i = static_cast<size_t>(t) * batch + b;
      const double ratio = std::exp(log_ratios[i]);
      const double rho = std::min(rho_bar, ratio);
      const double c = std::min(c_bar, ratio);
      const double g = done[i] ? 0.0 : gamma;
      const double v_t = values[i];
      const double v_tp1 = values[i + batch];
      const double delta = rho * (rewards[i] + g * v_tp1 - v_t);
      const double vs_t = v_t + delta + g * c * (v_next - v_tp1);
      out.vs[i] = vs_t;
      out.pg_adv[i] = rho * (rewards[i] + g * v_next - v_t);
      v_next = vs_t;
    }
  }
  return out;
}

VtraceResult vtrace_targets(const float* behavior_logits, const float* target_logits,
                            const int* actions, const double* rewards, const uint8_t* done,
                            const double* values, int steps, int batch, int n_actions,
                            double gamma, double rho_bar, double c_bar) {
  const size_t n = static_cast<size_t>(steps) * batch;
  std::vector<double> log_ratios(n);
  std::vector<double> lb(n_actions), lt(n_actions), row(n_actions);
  for (size_t i = 0; i < n; i++) {
    for (int a = 0; a < n_actions; a++) row[a] = behavior_logits[i * n_actions + a];
    nn::log_softmax_row(row.data(), n_actions, lb.data());
    for (int a = 0; a < n_actions; a++) row[a] = target_logits[i * n_actions + a];
    nn::log_softmax_row(row.data(), n_actions, lt.data());
    const int a = actions[i];
    RIDE_REQUIRE(a >= 0 && a < n_actions, "action out of range");
    RIDE_REQUIRE(std::isfinite(lb[a]) && lb[a] > -80.0,
                 "behavior probability is zero for a taken action");
    log_ratios[i] = lt[a] - lb[a];
  }
  return vtrace_from_log_ratios(log_ratios.data(), rewards, done, values, steps, batch, gamma,
                                rho_bar, c_bar);
}

}  // namespace ride::agent
