#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ride/core/error.hpp"

namespace ride::nn {

template <class T>
using MatMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
template <class T>
using ConstMatMap =
    Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
template <class T>
using VecMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>>;
template <class T>
using ConstVecMap = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>;

inline int conv_out_size(int n, int kernel = 3, int stride = 2, int pad = 1) {
  return (n + 2 * pad - kernel) / stride + 1;
}

// ---------------------------------------------------------------------------
// Convolution, NHWC, fixed 3x3/stride 2/pad 1 geometry expressed via dims.

struct ConvDims {
  int batch, in_h, in_w, in_c, filters;
  int kernel = 3, stride = 2, pad = 1;
  int out_h() const { return conv_out_size(in_h, kernel, stride, pad); }
  int out_w() const { return conv_out_size(in_w, kernel, stride, pad); }
  size_t patch() const { return static_cast<size_t>(kernel) * kernel * in_c; }
  size_t rows() const { return static_cast<size_t>(batch) * out_h() * out_w(); }
};

// col: rows() x patch(), laid out (ky, kx, c); zero-padded out-of-range taps.
template <class T>
void im2col(const T* in, const ConvDims& d, T* col) {
  const int oh = d.out_h(), ow = d.out_w();
  const size_t patch = d.patch();
  for (int b = 0; b < d.batch; b++) {
    const T* img = in + static_cast<size_t>(b) * d.in_h * d.in_w * d.in_c;
    for (int oy = 0; oy < oh; oy++) {
      for (int ox = 0; ox < ow; ox++) {
        T* row = col + ((static_cast<size_t>(b) * oh + oy) * ow + ox) * patch;
        for (int ky = 0; ky < d.kernel; ky++) {
          const int iy = oy * d.stride - d.pad + ky;
          for (int kx = 0; kx < d.kernel; kx++) {
            const int ix = ox * d.stride - d.pad + kx;
            T* dst = row + (static_cast<size_t>(ky) * d.kernel + kx) * d.in_c;
            if (iy < 0 || iy >= d.in_h || ix < 0 || ix >= d.in_w) {
              for (int c = 0; c < d.in_c; c++) dst[c] = T(0);
            } else {
              const T* src = img + (static_cast<size_t>(iy) * d.in_w + ix) * d.in_c;
              for (int c = 0; c < d.in_c; c++) dst[c] = src[c];
            }
          }
        }
      }
    }
  }
}

// weight: filters x patch; bias: filters; out: rows() x filters.
// `col` is caller-provided workspace, kept for the backward pass.
template <class T>
void conv_forward(const T* in, const T* weight, const T* bias, const ConvDims& d, T* col, T* out) {
  im2col(in, d, col);
  const auto rows = static_cast<Eigen::Index>(d.rows());
  const auto patch = static_cast<Eigen::Index>(d.patch());
  ConstMatMap<T> c(col, rows, patch);
  ConstMatMap<T> w(weight, d.filters, patch);
  MatMap<T> o(out, rows, d.filters);
  o.noalias() = c * w.transpose();
  o.rowwise() += ConstVecMap<T>(bias, d.filters).transpose();
}

// Accumulates into dweight/dbias; overwrites din (when non-null) via col2im.
template <class T>
void conv_backward(const T* col, const T* weight, const T* dout, const ConvDims& d, T* dweight,
                   T* dbias, T* dcol_ws, T* din) {
  const auto rows = static_cast<Eigen::Index>(d.rows());
  const auto patch = static_cast<Eigen::Index>(d.patch());
  ConstMatMap<T> do_(dout, rows, d.filters);
  ConstMatMap<T> c(col, rows, patch);
  MatMap<T>(dweight, d.filters, patch).noalias() += do_.transpose() * c;
  VecMap<T>(dbias, d.filters).noalias() += do_.colwise().sum().transpose();
  if (!din) return;

  MatMap<T> dc(dcol_ws, rows, patch);
  ConstMatMap<T> w(weight, d.filters, patch);
  dc.noalias() = do_ * w;

  const int oh = d.out_h(), ow = d.out_w();
  std::fill(din, din + static_cast<size_t>(d.batch) * d.in_h * d.in_w * d.in_c, T(0));
  for (int b = 0; b < d.batch; b++) {
    T* img = din + static_cast<size_t>(b) * d.in_h * d.in_w * d.in_c;
    for (int oy = 0; oy < oh; oy++) {
      for (int ox = 0; ox < ow; ox++) {
        const T* row = dcol_ws + ((static_cast<size_t>(b) * oh + oy) * ow + ox) * d.patch();
        for (int ky = 0; ky < d.kernel; ky++) {
          const int iy = oy * d.stride - d.pad + ky;
          if (iy < 0 || iy >= d.in_h) continue;
          for (int kx = 0; kx < d.kernel; kx++) {
            const int ix = ox * d.stride - d.pad + kx;
            if (ix < 0 || ix >= d.in_w) continue;
            const T* src = row + (static_cast<size_t>(ky) * d.kernel + kx) * d.in_c;
            T* dst = img + (static_cast<size_t>(iy) * d.in_w + ix) * d.in_c;
            for (int cc = 0; cc < d.in_c; cc++) dst[cc] += src[cc];
          }
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// ELU (alpha = 1). Backward uses the forward outputs: d/dx = y > 0 ? 1 : y+1.

template <class T>
void elu_forward(const T* x, T* y, size_t n) {
  for (size_t i = 0; i < n; i++) y[i] = x[i] > T(0) ? x[i] : std::expm1(x[i]);
}

template <class T>
void elu_backward(const T* y, const T* dy, T* dx, size_t n) {
  for (size_t i = 0; i < n; i++) dx[i] = dy[i] * (y[i] > T(0) ? T(1) : y[i] + T(1));
}

// ---------------------------------------------------------------------------
// Dense layer, weight: out x in (row-major), y = x W^T + b.

template <class T>
void dense_forward(const T* x, const T* weight, const T* bias, int batch, int in, int out, T* y) {
  ConstMatMap<T> xm(x, batch, in);
  ConstMatMap<T> w(weight, out, in);
  MatMap<T> ym(y, batch, out);
  ym.noalias() = xm * w.transpose();
  ym.rowwise() += ConstVecMap<T>(bias, out).transpose();
}

// Accumulates into dweight/dbias; overwrites dx when non-null.
template <class T>
void dense_backward(const T* x, const T* weight, const T* dy, int batch, int in, int out,
                    T* dweight, T* dbias, T* dx) {
  ConstMatMap<T> xm(x, batch, in);
  ConstMatMap<T> w(weight, out, in);
  ConstMatMap<T> dym(dy, batch, out);
  MatMap<T>(dweight, out, in).noalias() += dym.transpose() * xm;
  VecMap<T>(dbias, out).noalias() += dym.colwise().sum().transpose();
  if (dx) MatMap<T>(dx, batch, in).noalias() = dym * w;
}

// ---------------------------------------------------------------------------
// LSTM cell. Gate layout (i, f, g, o), packed 4H rows in w_ih (4H x in),
// w_hh (4H x hidden), bias (4H).

template <class T>
struct LstmStepCache {
  std::vector<T> x, h_prev, c_prev, gates, c, tanh_c;
  void resize(int batch, int in, int hidden) {
    x.resize(static_cast<size_t>(batch) * in);
    h_prev.resize(static_cast<size_t>(batch) * hidden);
    c_prev.resize(static_cast<size_t>(batch) * hidden);
    gates.resize(static_cast<size_t>(batch) * 4 * hidden);
    c.resize(static_cast<size_t>(batch) * hidden);
    tanh_c.resize(static_cast<size_t>(batch) * hidden);
  }
};

template <class T>
void lstm_forward_step(const T* x, const T* h_prev, const T* c_prev, const T* w_ih, const T* w_hh,
                       const T* bias, int batch, int in, int hidden, LstmStepCache<T>& cache,
                       T* h_out, T* c_out) {
  const int g4 = 4 * hidden;
  cache.resize(batch, in, hidden);
  std::copy(x, x + static_cast<size_t>(batch) * in, cache.x.begin());
  std::copy(h_prev, h_prev + static_cast<size_t>(batch) * hidden, cache.h_prev.begin());
  std::copy(c_prev, c_prev + static_cast<size_t>(batch) * hidden, cache.c_prev.begin());

  MatMap<T> gates(cache.gates.data(), batch, g4);
  gates.noalias() = ConstMatMap<T>(x, batch, in) * ConstMatMap<T>(w_ih, g4, in).transpose();
  gates.noalias() += ConstMatMap<T>(h_prev, batch, hidden) * ConstMatMap<T>(w_hh, g4, hidden).transpose();
  gates.rowwise() += ConstVecMap<T>(bias, g4).transpose();

  for (int b = 0; b < batch; b++) {
    T* g = cache.gates.data() + static_cast<size_t>(b) * g4;
    const T* cp = c_prev + static_cast<size_t>(b) * hidden;
    T* cn = c_out + static_cast<size_t>(b) * hidden;
    T* hn = h_out + static_cast<size_t>(b) * hidden;
    T* tc = cache.tanh_c.data() + static_cast<size_t>(b) * hidden;
    for (int k = 0; k < hidden; k++) {
      const T ig = T(1) / (T(1) + std::exp(-g[k]));
      const T fg = T(1) / (T(1) + std::exp(-g[hidden + k]));
      const T gg = std::tanh(g[2 * hidden + k]);
      const T og = T(1) / (T(1) + std::exp(-g[3 * hidden + k]));
      g[k] = ig;
      g[hidden + k] = fg;
      g[2 * hidden + k] = gg;
      g[3 * hidden + k] = og;
      const T c_new = fg * cp[k] + ig * gg;
      cn[k] = c_new;
      tc[k] = std::tanh(c_new);
      hn[k] = og * tc[k];
    }
    std::copy(cn, cn + hidden, cache.c.begin() + static_cast<size_t>(b) * hidden);
  }
}

// dh/dc are the incoming gradients and are replaced with the gradients for
// the previous step's h/c. Parameter grads accumulate; dx is overwritten.
template <class T>
void lstm_backward_step(const LstmStepCache<T>& cache, const T* w_ih, const T* w_hh, int batch,
                        int in, int hidden, T* dh, T* dc, T* dw_ih, T* dw_hh, T* dbias, T* dx,
                        std::vector<T>& dgates_ws) {
  const int g4 = 4 * hidden;
  dgates_ws.resize(static_cast<size_t>(batch) * g4);
  for (int b = 0; b < batch; b++) {
    const T* g = cache.gates.data() + static_cast<size_t>(b) * g4;
    const T* cp = cache.c_prev.data() + static_cast<size_t>(b) * hidden;
    const T* tc = cache.tanh_c.data() + static_cast<size_t>(b) * hidden;
    T* dhb = dh + static_cast<size_t>(b) * hidden;
    T* dcb = dc + static_cast<size_t>(b) * hidden;
    T* dg = dgates_ws.data() + static_cast<size_t>(b) * g4;
    for (int k = 0; k < hidden; k++) {
      const T ig = g[k], fg = g[hidden + k], gg = g[2 * hidden + k], og = g[3 * hidden + k];
      const T d_og = dhb[k] * tc[k];
      const T d_c = dcb[k] + dhb[k] * og * (T(1) - tc[k] * tc[k]);
      const T d_ig = d_c * gg;
      const T d_gg = d_c * ig;
      const T d_fg = d_c * cp[k];
      dcb[k] = d_c * fg;  // gradient for c_prev
      dg[k] = d_ig * ig * (T(1) - ig);
      dg[hidden + k] = d_fg * fg * (T(1) - fg);
      dg[2 * hidden + k] = d_gg * (T(1) - gg * gg);
      dg[3 * hidden + k] = d_og * og * (T(1) - og);
    }
  }
  ConstMatMap<T> dg(dgates_ws.data(), batch, g4);
  MatMap<T>(dw_ih, g4, in).noalias() += dg.transpose() * ConstMatMap<T>(cache.x.data(), batch, in);
  MatMap<T>(dw_hh, g4, hidden).noalias() +=
      dg.transpose() * ConstMatMap<T>(cache.h_prev.data(), batch, hidden);
  VecMap<T>(dbias, g4).noalias() += dg.colwise().sum().transpose();
  if (dx) MatMap<T>(dx, batch, in).noalias() = dg * ConstMatMap<T>(w_ih, g4, in);
  MatMap<T>(dh, batch, hidden).noalias() = dg * ConstMatMap<T>(w_hh, g4, hidden);
}

// ---------------------------------------------------------------------------
// Softmax helpers (row-wise over `n` classes).

template <class T>
void softmax_row(const T* logits, int n, T* probs) {
  T mx = logits[0];
  for (int i = 1; i < n; i++) mx = std::max(mx, logits[i]);
  T sum = T(0);
  for (int i = 0; i < n; i++) {
    probs[i] = std::exp(logits[i] - mx);
    sum += probs[i];
  }
  for (int i = 0; i < n; i++) probs[i] /= sum;
}

template <class T>
void log_softmax_row(const T* logits, int n, T* out) {
  T mx = logits[0];
  for (int i = 1; i < n; i++) mx = std::max(mx, logits[i]);
  T sum = T(0);
  for (int i = 0; i < n; i++) sum += std::exp(logits[i] - mx);
  const T lse = mx + std::log(sum);
  for (int i = 0; i < n; i++) out[i] = logits[i] - lse;
}

// Mean softmax cross-entropy over a batch; accumulates dlogits (d mean loss).
template <class T>
T softmax_xent(const T* logits, const int* labels, int batch, int n, T* dlogits) {
  T loss = T(0);
  std::vector<T> p(n);
  for (int b = 0; b < batch; b++) {
    const T* l = logits + static_cast<size_t>(b) * n;
    softmax_row(l, n, p.data());
    loss -= std::log(std::max(p[labels[b]], std::numeric_limits<T>::min()));
    if (dlogits) {
      T* d = dlogits + static_cast<size_t>(b) * n;
      for (int i = 0; i < n; i++) d[i] += (p[i] - (i == labels[b] ? T(1) : T(0))) / T(batch);
    }
  }
  return loss / T(batch);
}

}  // namespace ride::nn
