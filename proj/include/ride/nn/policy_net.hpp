#pragma once

#include "ride/nn/conv_trunk.hpp"

namespace ride::nn {

// Policy/value network: conv trunk -> LSTM(256) -> two linear heads.
// Forward handles a whole unroll; recurrent state is reset where the `done`
// flags mark episode boundaries.
template <class T>
struct PolicyNetT {
  ConvTrunkT<T> trunk;
  int hidden = 256;
  int n_actions = 7;

  void configure(int view_size, int n_act = 7, int lstm_hidden = 256) {
    trunk.configure(view_size);
    n_actions = n_act;
    hidden = lstm_hidden;
  }

  void register_params(ParamStoreT<T>& ps, Rng& rng) const {
    trunk.register_params(ps, rng);
    auto& w_ih = ps.add("lstm.w_ih", {4 * hidden, trunk.out_dim});
    auto& w_hh = ps.add("lstm.w_hh", {4 * hidden, hidden});
    ps.add("lstm.b", {4 * hidden});
    // Orthogonal per gate block.
    for (int g = 0; g < 4; g++) {
      TensorT<T> block({hidden, trunk.out_dim});
      orthogonal_init(block, rng);
      std::copy(block.data.begin(), block.data.end(),
                w_ih.data.begin() + static_cast<size_t>(g) * hidden * trunk.out_dim);
      TensorT<T> block_h({hidden, hidden});
      orthogonal_init(block_h, rng);
      std::copy(block_h.data.begin(), block_h.data.end(),
                w_hh.data.begin() + static_cast<size_t>(g) * hidden * hidden);
    }
    auto& pw = ps.add("pi.w", {n_actions, hidden});
    orthogonal_init(pw, rng, 0.01);  // near-uniform initial policy
    ps.add("pi.b", {n_actions});
    auto& vw = ps.add("v.w", {1, hidden});
    orthogonal_init(vw, rng);
    ps.add("v.b", {1});
  }

  struct Cache {
    int batch = 0, steps = 0;
    typename ConvTrunkT<T>::Cache trunk;
    std::vector<T> features;                    // steps*batch x out_dim
    std::vector<LstmStepCache<T>> lstm;         // one per step
    std::vector<T> h_all;                       // steps*batch x hidden (outputs)
    std::vector<T> masked_h, masked_c;          // working state
    const uint8_t* done = nullptr;              // (steps-1)*batch boundary flags
  };

  // obs: steps*batch x view^2*3, time-major. done[t*batch+b] set means the
  // transition taken after obs step t ended an episode, so state entering
  // step t+1 is zeroed. h0/c0: batch x hidden. logits: steps*batch x
  // n_actions; values: steps*batch. h_out/c_out receive the final state
  // (may be null).
  void forward(const ParamStoreT<T>& ps, const int8_t* obs, const uint8_t* done, int steps,
               int batch, const T* h0, const T* c0, Cache& cache, T* logits, T* values, T* h_out,
               T* c_out) const {
    const int E = trunk.out_dim;
    cache.batch = batch;
    cache.steps = steps;
    cache.done = done;
    cache.features.resize(static_cast<size_t>(steps) * batch * E);
    trunk.forward(ps, obs, steps * batch, cache.trunk, cache.features.data());

    cache.lstm.resize(steps);
    cache.h_all.resize(static_cast<size_t>(steps) * batch * hidden);
    cache.masked_h.assign(h0, h0 + static_cast<size_t>(batch) * hidden);
    cache.masked_c.assign(c0, c0 + static_cast<size_t>(batch) * hidden);
    std::vector<T> c_cur(static_cast<size_t>(batch) * hidden);

    for (int t = 0; t < steps; t++) {
      if (t > 0 && done) {
        for (int b = 0; b < batch; b++) {
          if (!done[static_cast<size_t>(t - 1) * batch + b]) continue;
          std::fill_n(cache.masked_h.begin() + static_cast<size_t>(b) * hidden, hidden, T(0));
          std::fill_n(cache.masked_c.begin() + static_cast<size_t>(b) * hidden, hidden, T(0));
        }
      }
      T* h_t = cache.h_all.data() + static_cast<size_t>(t) * batch * hidden;
      lstm_forward_step(cache.features.data() + static_cast<size_t>(t) * batch * E,
                        cache.masked_h.data(), cache.masked_c.data(), ps.value("lstm.w_ih"),
                        ps.value("lstm.w_hh"), ps.value("lstm.b"), batch, E, hidden,
                        cache.lstm[t], h_t, c_cur.data());
      std::copy(h_t, h_t + static_cast<size_t>(batch) * hidden, cache.masked_h.begin());
      cache.masked_c = c_cur;
    }

    dense_forward(cache.h_all.data(), ps.value("pi.w"), ps.value("pi.b"), steps * batch, hidden,
                  n_actions, logits);
    dense_forward(cache.h_all.data(), ps.value("v.w"), ps.value("v.b"), steps * batch, hidden, 1,
                  values);
    if (h_out) std::copy(cache.masked_h.begin(), cache.masked_h.end(), h_out);
    if (c_out) std::copy(cache.masked_c.begin(), cache.masked_c.end(), c_out);
  }

  // dlogits: steps*batch x n_actions; dvalues: steps*batch.
  void backward(ParamStoreT<T>& ps, Cache& cache, const T* dlogits, const T* dvalues) const {
    const int batch = cache.batch, steps = cache.steps, E = trunk.out_dim;
    const size_t bh = static_cast<size_t>(batch) * hidden;

    std::vector<T> dh_all(static_cast<size_t>(steps) * bh);
    std::vector<T> dh_head(static_cast<size_t>(steps) * bh);
    auto& pi = ps.at("pi.w");
    auto& v = ps.at("v.w");
    dense_backward(cache.h_all.data(), pi.value.ptr(), dlogits, steps * batch, hidden, n_actions,
                   pi.grad.ptr(), ps.grad("pi.b"), dh_all.data());
    dense_backward(cache.h_all.data(), v.value.ptr(), dvalues, steps * batch, hidden, 1,
                   v.grad.ptr(), ps.grad("v.b"), dh_head.data());
    for (size_t i = 0; i < dh_all.size(); i++) dh_all[i] += dh_head[i];

    auto& w_ih = ps.at("lstm.w_ih");
    auto& w_hh = ps.at("lstm.w_hh");
    std::vector<T> dh(bh, T(0)), dc(bh, T(0));
    std::vector<T> dfeat(static_cast<size_t>(steps) * batch * E);
    std::vector<T> dgates_ws;
    for (int t = steps - 1; t >= 0; t--) {
      T* dh_t = dh_all.data() + static_cast<size_t>(t) * bh;
      for (size_t i = 0; i < bh; i++) dh[i] += dh_t[i];
      lstm_backward_step(cache.lstm[t], w_ih.value.ptr(), w_hh.value.ptr(), batch, E, hidden,
                         dh.data(), dc.data(), w_ih.grad.ptr(), w_hh.grad.ptr(),
                         ps.grad("lstm.b"), dfeat.data() + static_cast<size_t>(t) * batch * E,
                         dgates_ws);
      if (t > 0 && cache.done) {
        for (int b = 0; b < batch; b++) {
          if (!cache.done[static_cast<size_t>(t - 1) * batch + b]) continue;
          std::fill_n(dh.begin() + static_cast<size_t>(b) * hidden, hidden, T(0));
          std::fill_n(dc.begin() + static_cast<size_t>(b) * hidden, hidden, T(0));
        }
      }
    }
    trunk.backward(ps, cache.trunk, dfeat.data());
  }
};

using PolicyNet = PolicyNetT<float>;

}  // namespace ride::nn
