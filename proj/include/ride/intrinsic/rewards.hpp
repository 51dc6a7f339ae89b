#pragma once

#include <cmath>
#include <string>

#include "ride/dynamics/models.hpp"
#include "ride/intrinsic/counts.hpp"

namespace ride::intrinsic {

enum class Method {
  ride,
  icm,
  rnd,
  count,
  only_episodic,
  no_episodic,
  vanilla,
};

Method method_from_string(const std::string& s);
const char* to_string(Method m);

inline bool method_uses_dynamics(Method m) {
  return m == Method::ride || m == Method::icm || m == Method::only_episodic ||
         m == Method::no_episodic;
}

struct RewardConfig {
  Method method = Method::ride;
  double omega_ir = 0.1;      // intrinsic reward coefficient
  double entropy_coef = 0.0005;
  bool no_extrinsic = false;  // train with r_e forced to zero
};

// ||phi_{t+1} - phi_t||_2 discounted by sqrt of the episodic visit count of
// the next state. Inputs are detached snapshots; no gradient flows through
// rewards.
template <class T>
double ride_reward(const T* phi_t, const T* phi_next, int dim, uint64_t n_ep) {
  RIDE_REQUIRE(n_ep >= 1, "episodic count must be >= 1");
  double s = 0;
  for (int i = 0; i < dim; i++) {
    const double d = static_cast<double>(phi_next[i]) - static_cast<double>(phi_t[i]);
    s += d * d;
  }
  return std::sqrt(s) / std::sqrt(static_cast<double>(n_ep));
}

// Squared embedding-space prediction error of the forward model.
template <class T>
double icm_reward(const T* phi_pred, const T* phi_next, int dim) {
  double s = 0;
  for (int i = 0; i < dim; i++) {
    const double d = static_cast<double>(phi_pred[i]) - static_cast<double>(phi_next[i]);
    s += d * d;
  }
  return s;
}

// 1/sqrt(N) from the across-training count (already incremented).
inline double count_reward(uint64_t global_count) {
  RIDE_REQUIRE(global_count >= 1, "global count must be >= 1");
  return 1.0 / std::sqrt(static_cast<double>(global_count));
}

// Ablations: only the episodic term, or only the impact term.
template <class T>
double ablation_reward(Method method, const T* phi_t, const T* phi_next, int dim, uint64_t n_ep) {
  if (method == Method::only_episodic) {
    RIDE_REQUIRE(n_ep >= 1, "episodic count must be >= 1");
    return 1.0 / std::sqrt(static_cast<double>(n_ep));
  }
  RIDE_REQUIRE(method == Method::no_episodic, "not an ablation method");
  return ride_reward(phi_t, phi_next, dim, 1);
}

// r = r_e + omega_ir * r_i (extrinsic dropped in no-extrinsic mode; vanilla
// carries no intrinsic term).
inline double combine_rewards(double r_e, double r_i, const RewardConfig& cfg) {
  if (cfg.no_extrinsic) r_e = 0.0;
  if (cfg.method == Method::vanilla) r_i = 0.0;
  return r_e + cfg.omega_ir * r_i;
}

// ---------------------------------------------------------------------------
// Random network distillation: a frozen random target and a trained
// predictor of the same architecture (conv trunk + 128-dim linear head).

template <class T>
struct RndNetT {
  nn::ConvTrunkT<T> trunk;
  int out_dim = 128;

  void configure(int view_size, int head_dim = 128) {
    trunk.configure(view_size);
    out_dim = head_dim;
  }

  void register_params(nn::ParamStoreT<T>& ps, Rng& rng) const {
    trunk.register_params(ps, rng);
    auto& w = ps.add("head.w", {out_dim, trunk.out_dim});
    nn::orthogonal_init(w, rng);
    ps.add("head.b", {out_dim});
  }

  struct Cache {
    typename nn::ConvTrunkT<T>::Cache trunk;
    std::vector<T> features;
    int batch = 0;
  };

  void forward(const nn::ParamStoreT<T>& ps, const int8_t* obs, int batch, Cache& c, T* out) const {
    c.batch = batch;
    c.features.resize(static_cast<size_t>(batch) * trunk.out_dim);
    trunk.forward(ps, obs, batch, c.trunk, c.features.data());
    nn::dense_forward(c.features.data(), ps.value("head.w"), ps.value("head.b"), batch,
                      trunk.out_dim, out_dim, out);
  }

  void backward(nn::ParamStoreT<T>& ps, Cache& c, const T* dout) const {
    std::vector<T> dfeat(static_cast<size_t>(c.batch) * trunk.out_dim);
    auto& head = ps.at("head.w");
    nn::dense_backward(c.features.data(), head.value.ptr(), dout, c.batch, trunk.out_dim, out_dim,
                       head.grad.ptr(), ps.grad("head.b"), dfeat.data());
    trunk.backward(ps, c.trunk, dfeat.data());
  }
};

using RndNet = RndNetT<float>;

// Target parameters are fixed for the lifetime of a run; only the predictor
// trains, on the same error that makes the bonus.
struct RndPair {
  RndNet net;
  nn::ParamStore target;
  nn::ParamStore predictor;

  void init(int view_size, Rng& rng) {
    net.configure(view_size);
    Rng target_rng = rng.split(0x7a67ull);
    Rng pred_rng = rng.split(0x9cedull);
    net.register_params(target, target_rng);
    net.register_params(predictor, pred_rng);
  }
};

// ||predictor(obs) - target(obs)||^2 for a single observation.
double rnd_reward(const RndPair& pair, const int8_t* obs);

}  // namespace ride::intrinsic
