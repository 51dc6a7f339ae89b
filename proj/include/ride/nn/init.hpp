#pragma once

#include <Eigen/Core>
#include <Eigen/QR>
#include <cmath>

#include "ride/core/rng.hpp"
#include "ride/core/tensor.hpp"

namespace ride::nn {

// Orthogonal init (QR of a Gaussian matrix, sign-fixed), treating the tensor
// as rows x cols with rows = shape[0].
template <class T>
void orthogonal_init(TensorT<T>& t, Rng& rng, double gain = 1.0) {
  const int rows = t.dim(0);
  const int cols = static_cast<int>(t.size()) / rows;
  const bool wide = cols > rows;
  const int m = wide ? cols : rows;
  const int n = wide ? rows : cols;
  Eigen::MatrixXd a(m, n);
  for (int i = 0; i < m; i++)
    for (int j = 0; j < n; j++) a(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, n);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
  for (int j = 0; j < n; j++)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  if (wide) q.transposeInPlace();
  for (int i = 0; i < rows; i++)
    for (int j = 0; j < cols; j++)
      t.data[static_cast<size_t>(i) * cols + j] = static_cast<T>(gain * q(i, j));
}

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)); the conv/dense-bias default.
template <class T>
void fan_in_uniform_init(TensorT<T>& t, Rng& rng, int fan_in) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (auto& v : t.data) v = static_cast<T>((2.0 * rng.uniform() - 1.0) * bound);
}

}  // namespace ride::nn
