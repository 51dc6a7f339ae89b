#pragma once

#include "ride/nn/conv_trunk.hpp"

namespace ride::dyn {

// State embedding phi: the conv trunk alone, trained only through the
// forward/inverse dynamics losses. Its parameters live in their own store,
// fully disjoint from the policy's.
template <class T>
struct EmbeddingNetT {
  nn::ConvTrunkT<T> trunk;

  void configure(int view_size) { trunk.configure(view_size); }
  int dim() const { return trunk.out_dim; }
  void register_params(nn::ParamStoreT<T>& ps, Rng& rng) const { trunk.register_params(ps, rng); }

  using Cache = typename nn::ConvTrunkT<T>::Cache;

  void forward(const nn::ParamStoreT<T>& ps, const int8_t* obs, int batch, Cache& cache,
               T* phi) const {
    trunk.forward(ps, obs, batch, cache, phi);
  }
  void backward(nn::ParamStoreT<T>& ps, Cache& cache, const T* dphi) const {
    trunk.backward(ps, cache, dphi);
  }
};

// Two ELU hidden layers of 256 units and a linear output.
template <class T>
struct MlpT {
  int in = 0, hidden = 256, out = 0;
  std::string prefix;

  void configure(std::string name, int in_dim, int out_dim, int hidden_dim = 256) {
    prefix = std::move(name);
    in = in_dim;
    out = out_dim;
    hidden = hidden_dim;
  }

  void register_params(nn::ParamStoreT<T>& ps, Rng& rng) const {
    auto add_dense = [&](const std::string& id, int rows, int cols, double gain) {
      auto& w = ps.add(prefix + "." + id + ".w", {rows, cols});
      nn::orthogonal_init(w, rng, gain);
      ps.add(prefix + "." + id + ".b", {rows});
    };
    add_dense("fc1", hidden, in, 1.0);
    add_dense("fc2", hidden, hidden, 1.0);
    add_dense("head", out, hidden, 1.0);
  }

  struct Cache {
    int batch = 0;
    std::vector<T> x, pre1, a1, pre2, a2;
  };

  void forward(const nn::ParamStoreT<T>& ps, const T* x, int batch, Cache& c, T* y) const {
    c.batch = batch;
    c.x.assign(x, x + static_cast<size_t>(batch) * in);
    c.pre1.resize(static_cast<size_t>(batch) * hidden);
    c.a1.resize(c.pre1.size());
    c.pre2.resize(c.pre1.size());
    c.a2.resize(c.pre1.size());
    nn::dense_forward(x, ps.value(prefix + ".fc1.w"), ps.value(prefix + ".fc1.b"), batch, in,
                      hidden, c.pre1.data());
    nn::elu_forward(c.pre1.data(), c.a1.data(), c.pre1.size());
    nn::dense_forward(c.a1.data(), ps.value(prefix + ".fc2.w"), ps.value(prefix + ".fc2.b"), batch,
                      hidden, hidden, c.pre2.data());
    nn::elu_forward(c.pre2.data(), c.a2.data(), c.pre2.size());
    nn::dense_forward(c.a2.data(), ps.value(prefix + ".head.w"), ps.value(prefix + ".head.b"),
                      batch, hidden, out, y);
  }

  // Accumulates parameter grads; writes input grads into dx when non-null.
  void backward(nn::ParamStoreT<T>& ps, Cache& c, const T* dy, T* dx) const {
    const int batch = c.batch;
    std::vector<T> da2(static_cast<size_t>(batch) * hidden);
    auto& head = ps.at(prefix + ".head.w");
    nn::dense_backward(c.a2.data(), head.value.ptr(), dy, batch, hidden, out, head.grad.ptr(),
                       ps.grad(prefix + ".head.b"), da2.data());
    std::vector<T> dpre2(da2.size());
    nn::elu_backward(c.a2.data(), da2.data(), dpre2.data(), da2.size());
    std::vector<T> da1(da2.size());
    auto& fc2 = ps.at(prefix + ".fc2.w");
    nn::dense_backward(c.a1.data(), fc2.value.ptr(), dpre2.data(), batch, hidden, hidden,
                       fc2.grad.ptr(), ps.grad(prefix + ".fc2.b"), da1.data());
    std::vector<T> dpre1(da1.size());
    nn::elu_backward(c.a1.data(), da1.data(), dpre1.data(), da1.size());
    auto& fc1 = ps.at(prefix + ".fc1.w");
    nn::dense_backward(c.x.data(), fc1.value.ptr(), dpre1.data(), batch, in, hidden,
                       fc1.grad.ptr(), ps.grad(prefix + ".fc1.b"), dx);
  }
};

// Forward dynamics model: (phi_t, one-hot action) -> predicted phi_{t+1}.
template <class T>
struct ForwardModelT {
  MlpT<T> mlp;
  int embed_dim = 0, n_actions = 7;

  void configure(int e, int n_act = 7, int hidden = 256) {
    embed_dim = e;
    n_actions = n_act;
    mlp.configure("fw", e + n_act, e, hidden);
  }
  void register_params(nn::ParamStoreT<T>& ps, Rng& rng) const { mlp.register_params(ps, rng); }

  struct Cache {
    typename MlpT<T>::Cache mlp;
    std::vector<T> input;
  };

  void forward(const nn::ParamStoreT<T>& ps, const T* phi, const int* actions, int batch, Cache& c,
               T* phi_pred) const {
    c.input.assign(static_cast<size_t>(batch) * (embed_dim + n_actions), T(0));
    for (int b = 0; b < batch; b++) {
      T* row = c.input.data() + static_cast<size_t>(b) * (embed_dim + n_actions);
      std::copy(phi + static_cast<size_t>(b) * embed_dim, phi + static_cast<size_t>(b + 1) * embed_dim, row);
      row[embed_dim + actions[b]] = T(1);
    }
    mlp.forward(ps, c.input.data(), batch, c.mlp, phi_pred);
  }

  // dphi_pred: batch x E. Adds the phi_t input gradient into dphi_t.
  void backward(nn::ParamStoreT<T>& ps, Cache& c, const T* dphi_pred, T* dphi_t) const {
    const int batch = c.mlp.batch;
    std::vector<T> dinput(static_cast<size_t>(batch) * (embed_dim + n_actions));
    mlp.backward(ps, c.mlp, dphi_pred, dinput.data());
    if (dphi_t)
      for (int b = 0; b < batch; b++) {
        const T* row = dinput.data() + static_cast<size_t>(b) * (embed_dim + n_actions);
        T* dst = dphi_t + static_cast<size_t>(b) * embed_dim;
        for (int i = 0; i < embed_dim; i++) dst[i] += row[i];
      }
  }
};

// Inverse dynamics model: (phi_t, phi_{t+1}) -> action logits.
template <class T>
struct InverseModelT {
  MlpT<T> mlp;
  int embed_dim = 0, n_actions = 7;

  void configure(int e, int n_act = 7, int hidden = 256) {
    embed_dim = e;
    n_actions = n_act;
    mlp.configure("inv", 2 * e, n_act, hidden);
  }
  void register_params(nn::ParamStoreT<T>& ps, Rng& rng) const { mlp.register_params(ps, rng); }

  struct Cache {
    typename MlpT<T>::Cache mlp;
    std::vector<T> input;
  };

  void forward(const nn::ParamStoreT<T>& ps, const T* phi_t, const T* phi_next, int batch,
               Cache& c, T* logits) const {
    c.input.resize(static_cast<size_t>(batch) * 2 * embed_dim);
    for (int b = 0; b < batch; b++) {
      T* row = c.input.data() + static_cast<size_t>(b) * 2 * embed_dim;
      std::copy(phi_t + static_cast<size_t>(b) * embed_dim,
                phi_t + static_cast<size_t>(b + 1) * embed_dim, row);
      std::copy(phi_next + static_cast<size_t>(b) * embed_dim,
                phi_next + static_cast<size_t>(b + 1) * embed_dim, row + embed_dim);
    }
    mlp.forward(ps, c.input.data(), batch, c.mlp, logits);
  }

  // Adds input gradients into dphi_t / dphi_next.
  void backward(nn::ParamStoreT<T>& ps, Cache& c, const T* dlogits, T* dphi_t, T* dphi_next) const {
    const int batch = c.mlp.batch;
    std::vector<T> dinput(static_cast<size_t>(batch) * 2 * embed_dim);
    mlp.backward(ps, c.mlp, dlogits, dinput.data());
    for (int b = 0; b < batch; b++) {
      const T* row = dinput.data() + static_cast<size_t>(b) * 2 * embed_dim;
      if (dphi_t)
        for (int i = 0; i < embed_dim; i++)
          dphi_t[static_cast<size_t>(b) * embed_dim + i] += row[i];
      if (dphi_next)
        for (int i = 0; i < embed_dim; i++)
          dphi_next[static_cast<size_t>(b) * embed_dim + i] += row[embed_dim + i];
    }
  }
};

// Per-sample squared L2 forward-model error; the ICM bonus and the L_fw
// training signal. Returns the batch mean; dpred/dtarget accumulate the
// gradients of the mean (when non-null).
template <class T>
T forward_dynamics_loss(const T* pred, const T* target, int batch, int dim, T* dpred, T* dtarget) {
  T loss = T(0);
  for (int b = 0; b < batch; b++) {
    const T* p = pred + static_cast<size_t>(b) * dim;
    const T* q = target + static_cast<size_t>(b) * dim;
    T* dp = dpred ? dpred + static_cast<size_t>(b) * dim : nullptr;
    T* dq = dtarget ? dtarget + static_cast<size_t>(b) * dim : nullptr;
    for (int i = 0; i < dim; i++) {
      const T diff = p[i] - q[i];
      loss += diff * diff;
      if (dp) dp[i] += T(2) * diff / T(batch);
      if (dq) dq[i] -= T(2) * diff / T(batch);
    }
  }
  return loss / T(batch);
}

using EmbeddingNet = EmbeddingNetT<float>;
using ForwardModel = ForwardModelT<float>;
using InverseModel = InverseModelT<float>;

}  // namespace ride::dyn
