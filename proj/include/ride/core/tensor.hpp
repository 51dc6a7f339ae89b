#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "ride/core/error.hpp"

namespace ride {

// Dense row-major tensor. Just shape + storage; all math lives in nn/ops.
template <class T>
struct TensorT {
  std::vector<int> shape;
  std::vector<T> data;

  TensorT() = default;
  explicit TensorT(std::vector<int> s) : shape(std::move(s)), data(count(shape)) {}
  TensorT(std::initializer_list<int> s) : TensorT(std::vector<int>(s)) {}

  static size_t count(const std::vector<int>& s) {
    size_t n = 1;
    for (int d : s) {
      RIDE_REQUIRE(d >= 0, "negative tensor dimension");
      n *= static_cast<size_t>(d);
    }
    return n;
  }

  size_t size() const { return data.size(); }
  int dim(size_t i) const { return shape.at(i); }
  T* ptr() { return data.data(); }
  const T* ptr() const { return data.data(); }
  void fill(T v) { std::fill(data.begin(), data.end(), v); }
  void zero() { fill(T(0)); }

  bool same_shape(const TensorT& o) const { return shape == o.shape; }
};

using Tensor = TensorT<float>;

}  // namespace ride
