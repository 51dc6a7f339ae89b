#pragma once

// Central-difference gradient checking in double precision, shared by the
// unit tests and the acceptance suite.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ride/nn/param_store.hpp"

namespace gradcheck {

inline constexpr double kStep = 1e-4;
inline constexpr double kRtol = 1e-3;
inline constexpr double kAtol = 1e-7;

struct Report {
  size_t checked = 0;
  size_t failed = 0;
  double worst_rel = 0;
  std::string worst_where;

  bool ok() const { return failed == 0; }
  void merge(const Report& o) {
    checked += o.checked;
    failed += o.failed;
    if (o.worst_rel > worst_rel) {
      worst_rel = o.worst_rel;
      worst_where = o.worst_where;
    }
  }
};

inline bool close(double analytic, double numeric) {
  return std::abs(analytic - numeric) <= kAtol + kRtol * std::max(std::abs(analytic), std::abs(numeric));
}

// Compares an analytic gradient array against central differences of `loss`
// taken w.r.t. each entry of `x`.
inline Report check_array(const std::function<double()>& loss, double* x, const double* analytic,
                          size_t n, const std::string& where) {
  Report rep;
  for (size_t i = 0; i < n; i++) {
    const double orig = x[i];
    x[i] = orig + kStep;
    const double fp = loss();
    x[i] = orig - kStep;
    const double fm = loss();
    x[i] = orig;
    const double numeric = (fp - fm) / (2 * kStep);
    rep.checked++;
    const double denom = std::max(std::abs(analytic[i]), std::abs(numeric));
    const double rel = std::abs(analytic[i] - numeric) / std::max(denom, 1e-12);
    if (!close(analytic[i], numeric)) {
      rep.failed++;
      if (rel > rep.worst_rel) {
        rep.worst_rel = rel;
        rep.worst_where = where + "[" + std::to_string(i) + "]";
      }
    }
  }
  return rep;
}

// Checks every parameter of a store against central differences of `loss`.
// `grads_of` must return the analytic gradient already accumulated in the
// store (loss() must not disturb the gradients).
inline Report check_store(const std::function<double()>& loss,
                          ride::nn::ParamStoreT<double>& store, const std::string& where) {
  Report rep;
  for (auto& e : store.entries)
    rep.merge(check_array(loss, e.value.ptr(), e.grad.ptr(), e.value.size(), where + ":" + e.name));
  return rep;
}

inline void fill_random(double* x, size_t n, ride::Rng& rng, double scale = 1.0) {
  for (size_t i = 0; i < n; i++) x[i] = rng.normal() * scale;
}

}  // namespace gradcheck
