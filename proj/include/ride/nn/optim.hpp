#pragma once

#include <cmath>
#include <cstdint>

#include "ride/nn/param_store.hpp"

namespace ride::nn {

struct OptimConfig {
  double learning_rate = 1e-4;
  double momentum = 0.0;
  double epsilon = 0.01;
  double decay = 0.99;       // squared-gradient averaging constant
  double clip_norm = 40.0;   // global gradient norm bound per store
  uint64_t anneal_total_steps = 0;  // 0 disables the linear lr anneal
};

// effective lr = lr * max(0, 1 - step / total)
inline double annealed_lr(const OptimConfig& cfg, uint64_t global_step) {
  if (cfg.anneal_total_steps == 0) return cfg.learning_rate;
  const double frac = 1.0 - static_cast<double>(global_step) / static_cast<double>(cfg.anneal_total_steps);
  return cfg.learning_rate * std::max(0.0, frac);
}

// One RMSProp update over every parameter in the store: global norm clip,
// squared-gradient accumulator, optional momentum, linearly annealed lr.
// Gradients are zeroed afterwards. NaN/inf gradients abort with the name of
// the offending parameter.
template <class T>
void rmsprop_step(ParamStoreT<T>& store, const OptimConfig& cfg, uint64_t global_step) {
  double sq_sum = 0.0;
  for (const auto& e : store.entries) {
    for (T g : e.grad.data) {
      if (!std::isfinite(static_cast<double>(g)))
        throw NumericError("non-finite gradient in parameter '" + e.name + "'");
      sq_sum += static_cast<double>(g) * static_cast<double>(g);
    }
  }
  const double norm = std::sqrt(sq_sum);
  const double scale = (cfg.clip_norm > 0 && norm > cfg.clip_norm) ? cfg.clip_norm / norm : 1.0;
  const double lr = annealed_lr(cfg, global_step);

  for (auto& e : store.entries) {
    for (size_t i = 0; i < e.value.size(); i++) {
      const double g = static_cast<double>(e.grad.data[i]) * scale;
      double avg = cfg.decay * static_cast<double>(e.rms.data[i]) + (1.0 - cfg.decay) * g * g;
      e.rms.data[i] = static_cast<T>(avg);
      const double denom = std::sqrt(avg) + cfg.epsilon;
      if (cfg.momentum > 0) {
        double m = cfg.momentum * static_cast<double>(e.momentum.data[i]) + g / denom;
        e.momentum.data[i] = static_cast<T>(m);
        e.value.data[i] = static_cast<T>(static_cast<double>(e.value.data[i]) - lr * m);
      } else {
        e.value.data[i] = static_cast<T>(static_cast<double>(e.value.data[i]) - lr * g / denom);
      }
      e.grad.data[i] = T(0);
    }
  }
}

}  // namespace ride::nn
