#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ride/core/error.hpp"
#include "ride/core/tensor.hpp"

namespace ride::nn {

// Named parameter arrays with paired gradient buffers and RMSProp state.
// Registration order is fixed, which makes checkpoints and updates
// deterministic.
template <class T>
struct ParamStoreT {
  struct Entry {
    std::string name;
    TensorT<T> value;
    TensorT<T> grad;
    TensorT<T> rms;       // RMSProp squared-gradient accumulator
    TensorT<T> momentum;  // used only when momentum > 0
  };

  std::vector<Entry> entries;

  TensorT<T>& add(const std::string& name, std::vector<int> shape) {
    RIDE_REQUIRE(find(name) == nullptr, "duplicate parameter name: " + name);
    Entry e;
    e.name = name;
    e.value = TensorT<T>(shape);
    e.grad = TensorT<T>(shape);
    e.rms = TensorT<T>(shape);
    e.momentum = TensorT<T>(shape);
    entries.push_back(std::move(e));
    return entries.back().value;
  }

  Entry* find(const std::string& name) {
    for (auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }
  const Entry* find(const std::string& name) const {
    for (auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }

  Entry& at(const std::string& name) {
    auto* e = find(name);
    RIDE_REQUIRE(e != nullptr, "unknown parameter: " + name);
    return *e;
  }
  const Entry& at(const std::string& name) const {
    auto* e = find(name);
    RIDE_REQUIRE(e != nullptr, "unknown parameter: " + name);
    return *e;
  }

  T* value(const std::string& name) { return at(name).value.ptr(); }
  const T* value(const std::string& name) const { return at(name).value.ptr(); }
  T* grad(const std::string& name) { return at(name).grad.ptr(); }

  void zero_grads() {
    for (auto& e : entries) e.grad.zero();
  }

  size_t param_count() const {
    size_t n = 0;
    for (const auto& e : entries) n += e.value.size();
    return n;
  }

  double grad_norm() const {
    double s = 0;
    for (const auto& e : entries)
      for (T g : e.grad.data) s += static_cast<double>(g) * static_cast<double>(g);
    return std::sqrt(s);
  }

  bool same_layout(const ParamStoreT& o) const {
    if (entries.size() != o.entries.size()) return false;
    for (size_t i = 0; i < entries.size(); i++)
      if (entries[i].name != o.entries[i].name ||
          entries[i].value.shape != o.entries[i].value.shape)
        return false;
    return true;
  }

  // Copies values (not grads) from another store with identical layout.
  void copy_values_from(const ParamStoreT& o) {
    RIDE_REQUIRE(same_layout(o), "parameter store layout mismatch");
    for (size_t i = 0; i < entries.size(); i++) {
      entries[i].value.data = o.entries[i].value.data;
      entries[i].rms.data = o.entries[i].rms.data;
      entries[i].momentum.data = o.entries[i].momentum.data;
    }
  }
};

using ParamStore = ParamStoreT<float>;

// Checkpoint file: magic/version header, name table with shapes, then
// little-endian float32 arrays (value + optimizer state per parameter).
void save_param_store(const ParamStore& store, const std::string& path);
void load_param_store(ParamStore& store, const std::string& path);

// Loads a checkpoint without a pre-built layout.
ParamStore load_param_store(const std::string& path);

}  // namespace ride::nn
