#pragma once

#include "ride/core/rng.hpp"
#include "ride/nn/init.hpp"
#include "ride/nn/ops.hpp"
#include "ride/nn/param_store.hpp"

namespace ride::nn {

// Observation codes go into the conv stack as raw real values, unnormalized.
template <class T>
void obs_to_real(const int8_t* obs, size_t n, T* out) {
  for (size_t i = 0; i < n; i++) out[i] = static_cast<T>(obs[i]);
}

// The shared image trunk: three 3x3/stride-2/pad-1 convolutions with 32
// filters and an ELU after each, flattened.
template <class T>
struct ConvTrunkT {
  int view = 7;
  int in_c = 3;
  int filters = 32;
  int out_dim = 0;

  void configure(int view_size, int channels = 3, int n_filters = 32) {
    view = view_size;
    in_c = channels;
    filters = n_filters;
    int s = view;
    for (int i = 0; i < 3; i++) s = conv_out_size(s);
    RIDE_REQUIRE(s >= 1, "view too small for three stride-2 convolutions");
    out_dim = filters * s * s;
  }

  void register_params(ParamStoreT<T>& ps, Rng& rng) const {
    int c = in_c;
    for (int layer = 1; layer <= 3; layer++) {
      const int fan_in = 3 * 3 * c;
      auto& w = ps.add("conv" + std::to_string(layer) + ".w", {filters, fan_in});
      fan_in_uniform_init(w, rng, fan_in);
      auto& b = ps.add("conv" + std::to_string(layer) + ".b", {filters});
      fan_in_uniform_init(b, rng, fan_in);
      c = filters;
    }
  }

  ConvDims dims(int layer, int batch) const {
    int s = view, c = in_c;
    for (int i = 1; i < layer; i++) {
      s = conv_out_size(s);
      c = filters;
    }
    return ConvDims{batch, s, s, c, filters};
  }

  struct Cache {
    int batch = 0;
    std::vector<T> input;                   // float-converted observations
    std::vector<T> col[3], pre[3], act[3];  // per layer
    std::vector<T> scratch;                 // dcol / dact workspace
  };

  // obs: batch x view*view*in_c (int8 codes); out: batch x out_dim.
  void forward(const ParamStoreT<T>& ps, const int8_t* obs, int batch, Cache& cache, T* out) const {
    cache.batch = batch;
    const size_t in_n = static_cast<size_t>(batch) * view * view * in_c;
    cache.input.resize(in_n);
    obs_to_real(obs, in_n, cache.input.data());

    const T* x = cache.input.data();
    for (int layer = 1; layer <= 3; layer++) {
      const ConvDims d = dims(layer, batch);
      const size_t out_n = d.rows() * d.filters;
      auto& col = cache.col[layer - 1];
      auto& pre = cache.pre[layer - 1];
      auto& act = cache.act[layer - 1];
      col.resize(d.rows() * d.patch());
      pre.resize(out_n);
      act.resize(out_n);
      conv_forward(x, ps.value("conv" + std::to_string(layer) + ".w"),
                   ps.value("conv" + std::to_string(layer) + ".b"), d, col.data(), pre.data());
      elu_forward(pre.data(), act.data(), out_n);
      x = act.data();
    }
    std::copy(cache.act[2].begin(), cache.act[2].end(), out);
  }

  // dout: batch x out_dim. Accumulates parameter gradients.
  void backward(ParamStoreT<T>& ps, Cache& cache, const T* dout) const {
    const int batch = cache.batch;
    std::vector<T> dact(dout, dout + static_cast<size_t>(batch) * out_dim);
    std::vector<T> dpre, din;
    for (int layer = 3; layer >= 1; layer--) {
      const ConvDims d = dims(layer, batch);
      const size_t out_n = d.rows() * d.filters;
      dpre.resize(out_n);
      elu_backward(cache.act[layer - 1].data(), dact.data(), dpre.data(), out_n);
      const std::string id = std::to_string(layer);
      auto& entry = ps.at("conv" + id + ".w");
      T* din_ptr = nullptr;
      if (layer > 1) {
        din.resize(static_cast<size_t>(batch) * d.in_h * d.in_w * d.in_c);
        din_ptr = din.data();
        cache.scratch.resize(d.rows() * d.patch());
      }
      conv_backward(cache.col[layer - 1].data(), entry.value.ptr(), dpre.data(), d,
                    entry.grad.ptr(), ps.grad("conv" + id + ".b"),
                    din_ptr ? cache.scratch.data() : nullptr, din_ptr);
      if (layer > 1) dact = din;
    }
  }
};

using ConvTrunk = ConvTrunkT<float>;

}  // namespace ride::nn
