#pragma once

#include <cmath>
#include <vector>

#include "ride/agent/vtrace.hpp"
#include "ride/nn/ops.hpp"

namespace ride::agent {

struct RlLossParts {
  double pg = 0;             // -sum log pi(a) * advantage
  double baseline = 0;       // baseline_coef * 0.5 * sum (vs - V)^2
  double entropy_term = 0;   // entropy_coef * sum of negative entropies
  double mean_entropy = 0;   // mean per-step policy entropy
  double total() const { return pg + baseline + entropy_term; }
};

// Policy-gradient + baseline + entropy loss with V-trace targets treated as
// constants. Accumulates dlogits/dvalues (scaled by omega_pi) over T*B rows.
template <class T>
RlLossParts rl_loss_grads_t(const T* logits, const T* values, const int* actions, int steps,
                            int batch, int n_actions, const VtraceResult& vt, double entropy_coef,
                            double baseline_coef, double omega_pi, T* dlogits, T* dvalues) {
  RlLossParts parts;
  std::vector<double> row(n_actions), logp(n_actions), p(n_actions);
  double entropy_sum = 0;
  for (size_t i = 0; i < static_cast<size_t>(steps) * batch; i++) {
    for (int a = 0; a < n_actions; a++) row[a] = static_cast<double>(logits[i * n_actions + a]);
    nn::log_softmax_row(row.data(), n_actions, logp.data());
    double h = 0;
    for (int a = 0; a < n_actions; a++) {
      p[a] = std::exp(logp[a]);
      h -= p[a] * logp[a];
    }
    entropy_sum += h;

    const int act = actions[i];
    const double adv = vt.pg_adv[i];
    parts.pg -= logp[act] * adv;

    const double v = static_cast<double>(values[i]);
    const double err = vt.vs[i] - v;
    parts.baseline += 0.5 * baseline_coef * err * err;
    if (dvalues) dvalues[i] += static_cast<T>(omega_pi * baseline_coef * (v - vt.vs[i]));

    if (dlogits) {
      for (int a = 0; a < n_actions; a++) {
        const double d_pg = adv * (p[a] - (a == act ? 1.0 : 0.0));
        const double d_ent = entropy_coef * p[a] * (logp[a] + h);
        dlogits[i * n_actions + a] += static_cast<T>(omega_pi * (d_pg + d_ent));
      }
    }
  }
  parts.entropy_term = -entropy_coef * entropy_sum;
  parts.mean_entropy = entropy_sum / (static_cast<double>(steps) * batch);
  return parts;
}

}  // namespace ride::agent
