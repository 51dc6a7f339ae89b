#pragma once

// The gradient-check cases themselves: every differentiable operation, on
// randomized small shapes. Used by test_gradcheck and the acceptance suite.

#include <memory>

#include "ride/agent/rl_loss.hpp"
#include "ride/dynamics/models.hpp"
#include "ride/intrinsic/rewards.hpp"
#include "ride/nn/policy_net.hpp"
#include "support/gradcheck.hpp"

namespace gradcheck {

using ride::Rng;
using ride::nn::ConvDims;
using ride::nn::ParamStoreT;

// Scalar loss = sum of outputs weighted by fixed random coefficients.
inline double weighted(const std::vector<double>& out, const std::vector<double>& w) {
  double s = 0;
  for (size_t i = 0; i < out.size(); i++) s += out[i] * w[i];
  return s;
}

inline Report check_dense(uint64_t seed) {
  Rng rng(seed);
  const int B = 1 + static_cast<int>(rng.below(4));
  const int in = 1 + static_cast<int>(rng.below(6));
  const int out = 1 + static_cast<int>(rng.below(5));
  std::vector<double> x(B * in), w(out * in), b(out), y(B * out), coef(B * out);
  fill_random(x.data(), x.size(), rng);
  fill_random(w.data(), w.size(), rng, 0.5);
  fill_random(b.data(), b.size(), rng, 0.2);
  fill_random(coef.data(), coef.size(), rng);

  auto loss = [&] {
    ride::nn::dense_forward(x.data(), w.data(), b.data(), B, in, out, y.data());
    return weighted(y, coef);
  };
  loss();
  std::vector<double> dw(w.size(), 0), db(b.size(), 0), dx(x.size(), 0);
  ride::nn::dense_backward(x.data(), w.data(), coef.data(), B, in, out, dw.data(), db.data(),
                           dx.data());
  Report rep;
  rep.merge(check_array(loss, w.data(), dw.data(), w.size(), "dense.w"));
  rep.merge(check_array(loss, b.data(), db.data(), b.size(), "dense.b"));
  rep.merge(check_array(loss, x.data(), dx.data(), x.size(), "dense.x"));
  return rep;
}

inline Report check_elu(uint64_t seed) {
  Rng rng(seed);
  const size_t n = 1 + rng.below(16);
  std::vector<double> x(n), y(n), coef(n);
  fill_random(x.data(), n, rng);
  fill_random(coef.data(), n, rng);
  auto loss = [&] {
    ride::nn::elu_forward(x.data(), y.data(), n);
    return weighted(y, coef);
  };
  loss();
  std::vector<double> dx(n, 0);
  ride::nn::elu_backward(y.data(), coef.data(), dx.data(), n);
  return check_array(loss, x.data(), dx.data(), n, "elu.x");
}

inline Report check_conv(uint64_t seed) {
  Rng rng(seed);
  ConvDims d;
  d.batch = 1 + static_cast<int>(rng.below(3));
  d.in_h = d.in_w = 3 + static_cast<int>(rng.below(5));
  d.in_c = 1 + static_cast<int>(rng.below(3));
  d.filters = 1 + static_cast<int>(rng.below(4));
  const size_t in_n = static_cast<size_t>(d.batch) * d.in_h * d.in_w * d.in_c;
  const size_t w_n = static_cast<size_t>(d.filters) * d.patch();
  const size_t out_n = d.rows() * d.filters;
  std::vector<double> x(in_n), w(w_n), b(d.filters), col(d.rows() * d.patch()), y(out_n),
      coef(out_n);
  fill_random(x.data(), in_n, rng);
  fill_random(w.data(), w_n, rng, 0.5);
  fill_random(b.data(), d.filters, rng, 0.2);
  fill_random(coef.data(), out_n, rng);

  auto loss = [&] {
    ride::nn::conv_forward(x.data(), w.data(), b.data(), d, col.data(), y.data());
    return weighted(y, coef);
  };
  loss();
  std::vector<double> dw(w_n, 0), db(d.filters, 0), dcol(col.size()), dx(in_n, 0);
  ride::nn::conv_backward(col.data(), w.data(), coef.data(), d, dw.data(), db.data(), dcol.data(),
                          dx.data());
  Report rep;
  rep.merge(check_array(loss, w.data(), dw.data(), w_n, "conv.w"));
  rep.merge(check_array(loss, b.data(), db.data(), d.filters, "conv.b"));
  rep.merge(check_array(loss, x.data(), dx.data(), in_n, "conv.x"));
  return rep;
}

inline Report check_lstm(uint64_t seed) {
  Rng rng(seed);
  const int B = 1 + static_cast<int>(rng.below(3));
  const int in = 1 + static_cast<int>(rng.below(4));
  const int H = 1 + static_cast<int>(rng.below(4));
  std::vector<double> x(B * in), h0(B * H), c0(B * H), w_ih(4 * H * in), w_hh(4 * H * H),
      bias(4 * H), h1(B * H), c1(B * H), coef_h(B * H), coef_c(B * H);
  for (auto* v : {&x, &h0, &c0, &coef_h, &coef_c}) fill_random(v->data(), v->size(), rng, 0.8);
  fill_random(w_ih.data(), w_ih.size(), rng, 0.4);
  fill_random(w_hh.data(), w_hh.size(), rng, 0.4);
  fill_random(bias.data(), bias.size(), rng, 0.2);

  ride::nn::LstmStepCache<double> cache;
  auto loss = [&] {
    ride::nn::lstm_forward_step(x.data(), h0.data(), c0.data(), w_ih.data(), w_hh.data(),
                                bias.data(), B, in, H, cache, h1.data(), c1.data());
    return weighted(h1, coef_h) + weighted(c1, coef_c);
  };
  loss();
  std::vector<double> dh = coef_h, dc = coef_c;
  std::vector<double> dw_ih(w_ih.size(), 0), dw_hh(w_hh.size(), 0), dbias(bias.size(), 0),
      dx(x.size(), 0), ws;
  ride::nn::lstm_backward_step(cache, w_ih.data(), w_hh.data(), B, in, H, dh.data(), dc.data(),
                               dw_ih.data(), dw_hh.data(), dbias.data(), dx.data(), ws);
  Report rep;
  rep.merge(check_array(loss, w_ih.data(), dw_ih.data(), w_ih.size(), "lstm.w_ih"));
  rep.merge(check_array(loss, w_hh.data(), dw_hh.data(), w_hh.size(), "lstm.w_hh"));
  rep.merge(check_array(loss, bias.data(), dbias.data(), bias.size(), "lstm.b"));
  rep.merge(check_array(loss, x.data(), dx.data(), x.size(), "lstm.x"));
  // dh/dc now hold the gradients w.r.t. h0/c0.
  rep.merge(check_array(loss, h0.data(), dh.data(), h0.size(), "lstm.h0"));
  rep.merge(check_array(loss, c0.data(), dc.data(), c0.size(), "lstm.c0"));
  return rep;
}

inline Report check_softmax_xent(uint64_t seed) {
  Rng rng(seed);
  const int B = 1 + static_cast<int>(rng.below(4));
  const int n = 2 + static_cast<int>(rng.below(6));
  std::vector<double> logits(B * n);
  std::vector<int> labels(B);
  fill_random(logits.data(), logits.size(), rng);
  for (auto& l : labels) l = static_cast<int>(rng.below(n));
  auto loss = [&] {
    return ride::nn::softmax_xent<double>(logits.data(), labels.data(), B, n, nullptr);
  };
  std::vector<double> dlogits(logits.size(), 0);
  ride::nn::softmax_xent(logits.data(), labels.data(), B, n, dlogits.data());
  return check_array(loss, logits.data(), dlogits.data(), logits.size(), "xent.logits");
}

// Tiny end-to-end policy network over an unroll with episode boundaries.
inline Report check_policy_net(uint64_t seed) {
  Rng rng(seed);
  ride::nn::PolicyNetT<double> net;
  const int view = 5;
  net.trunk.configure(view, 3, 2);
  net.hidden = 3;
  net.n_actions = 4;
  ParamStoreT<double> ps;
  Rng init_rng(seed ^ 0x5eedull);
  net.register_params(ps, init_rng);

  const int B = 2, steps = 3;
  std::vector<int8_t> obs(static_cast<size_t>(steps) * B * view * view * 3);
  for (auto& o : obs) o = static_cast<int8_t>(rng.below(8));
  std::vector<uint8_t> done(static_cast<size_t>(steps - 1) * B, 0);
  done[rng.below(done.size())] = 1;  // one episode boundary somewhere
  std::vector<double> h0(B * net.hidden), c0(B * net.hidden);
  fill_random(h0.data(), h0.size(), rng, 0.3);
  fill_random(c0.data(), c0.size(), rng, 0.3);

  const size_t n_logits = static_cast<size_t>(steps) * B * net.n_actions;
  std::vector<double> logits(n_logits), values(steps * B), coef_l(n_logits),
      coef_v(steps * B);
  fill_random(coef_l.data(), coef_l.size(), rng);
  fill_random(coef_v.data(), coef_v.size(), rng);

  typename ride::nn::PolicyNetT<double>::Cache cache;
  auto loss = [&] {
    net.forward(ps, obs.data(), done.data(), steps, B, h0.data(), c0.data(), cache, logits.data(),
                values.data(), nullptr, nullptr);
    return weighted(logits, coef_l) + weighted(values, coef_v);
  };
  loss();
  ps.zero_grads();
  net.backward(ps, cache, coef_l.data(), coef_v.data());
  return check_store(loss, ps, "policy");
}

// Embedding + forward + inverse dynamics: checks that dL/d(theta_emb)
// combines both loss paths correctly.
inline Report check_dynamics_losses(uint64_t seed) {
  Rng rng(seed);
  const int view = 5;
  ride::dyn::EmbeddingNetT<double> emb;
  emb.trunk.configure(view, 3, 2);
  ParamStoreT<double> emb_ps;
  Rng r1(seed ^ 1);
  emb.register_params(emb_ps, r1);
  const int E = emb.dim();
  const int A = 3;

  ride::dyn::ForwardModelT<double> fw;
  fw.configure(E, A, 4);
  ParamStoreT<double> fw_ps;
  Rng r2(seed ^ 2);
  fw.register_params(fw_ps, r2);

  ride::dyn::InverseModelT<double> inv;
  inv.configure(E, A, 4);
  ParamStoreT<double> inv_ps;
  Rng r3(seed ^ 3);
  inv.register_params(inv_ps, r3);

  const int n = 3;  // transitions
  std::vector<int8_t> obs(static_cast<size_t>(n + 1) * view * view * 3);
  for (auto& o : obs) o = static_cast<int8_t>(rng.below(8));
  std::vector<int> actions(n);
  for (auto& a : actions) a = static_cast<int>(rng.below(A));
  const double w_fw = 1.7, w_inv = 0.6;

  typename ride::dyn::EmbeddingNetT<double>::Cache emb_cache;
  typename ride::dyn::ForwardModelT<double>::Cache fw_cache;
  typename ride::dyn::InverseModelT<double>::Cache inv_cache;
  std::vector<double> phi((n + 1) * E), pred(n * E), inv_logits(n * A);

  auto loss = [&] {
    emb.forward(emb_ps, obs.data(), n + 1, emb_cache, phi.data());
    fw.forward(fw_ps, phi.data(), actions.data(), n, fw_cache, pred.data());
    const double l_fw = ride::dyn::forward_dynamics_loss<double>(pred.data(), phi.data() + E, n, E,
                                                                 nullptr, nullptr);
    inv.forward(inv_ps, phi.data(), phi.data() + E, n, inv_cache, inv_logits.data());
    const double l_inv =
        ride::nn::softmax_xent<double>(inv_logits.data(), actions.data(), n, A, nullptr);
    return w_fw * l_fw + w_inv * l_inv;
  };
  loss();

  emb_ps.zero_grads();
  fw_ps.zero_grads();
  inv_ps.zero_grads();
  std::vector<double> dphi((n + 1) * E, 0);
  std::vector<double> dpred(n * E, 0);
  ride::dyn::forward_dynamics_loss<double>(pred.data(), phi.data() + E, n, E, dpred.data(),
                                           nullptr);
  for (auto& g : dpred) g *= w_fw;
  for (int i = 0; i < n * E; i++)
    dphi[E + i] += -2.0 * w_fw * (pred[i] - phi[E + i]) / n;
  fw.backward(fw_ps, fw_cache, dpred.data(), dphi.data());
  std::vector<double> dinv(n * A, 0);
  ride::nn::softmax_xent(inv_logits.data(), actions.data(), n, A, dinv.data());
  for (auto& g : dinv) g *= w_inv;
  inv.backward(inv_ps, inv_cache, dinv.data(), dphi.data(), dphi.data() + E);
  emb.backward(emb_ps, emb_cache, dphi.data());

  Report rep;
  rep.merge(check_store(loss, emb_ps, "embedding"));
  rep.merge(check_store(loss, fw_ps, "forward_model"));
  rep.merge(check_store(loss, inv_ps, "inverse_model"));
  return rep;
}

// RL loss gradient w.r.t. logits and values (targets held fixed).
inline Report check_rl_loss(uint64_t seed) {
  Rng rng(seed);
  const int T = 3, B = 2, A = 4;
  std::vector<double> logits(T * B * A), values(T * B);
  std::vector<int> actions(T * B);
  fill_random(logits.data(), logits.size(), rng);
  fill_random(values.data(), values.size(), rng);
  for (auto& a : actions) a = static_cast<int>(rng.below(A));
  ride::agent::VtraceResult vt;
  vt.vs.resize(T * B);
  vt.pg_adv.resize(T * B);
  fill_random(vt.vs.data(), vt.vs.size(), rng);
  fill_random(vt.pg_adv.data(), vt.pg_adv.size(), rng);
  const double entropy_coef = 0.01, baseline_coef = 0.5, omega_pi = 1.3;

  // Gradients carry the omega_pi scale, so check them against omega_pi * L.
  auto scaled_loss = [&] {
    return omega_pi * ride::agent::rl_loss_grads_t<double>(logits.data(), values.data(),
                                                           actions.data(), T, B, A, vt,
                                                           entropy_coef, baseline_coef, omega_pi,
                                                           nullptr, nullptr)
                          .total();
  };
  std::vector<double> dlogits(logits.size(), 0), dvalues(values.size(), 0);
  ride::agent::rl_loss_grads_t<double>(logits.data(), values.data(), actions.data(), T, B, A, vt,
                                       entropy_coef, baseline_coef, omega_pi, dlogits.data(),
                                       dvalues.data());
  Report rep;
  rep.merge(check_array(scaled_loss, logits.data(), dlogits.data(), logits.size(), "rl.logits"));
  rep.merge(check_array(scaled_loss, values.data(), dvalues.data(), values.size(), "rl.values"));
  return rep;
}

// RND predictor distillation loss.
inline Report check_rnd(uint64_t seed) {
  Rng rng(seed);
  const int view = 5;
  ride::intrinsic::RndNetT<double> net;
  net.trunk.configure(view, 3, 2);
  net.out_dim = 5;
  ParamStoreT<double> target_ps, pred_ps;
  Rng r1(seed ^ 11), r2(seed ^ 12);
  net.register_params(target_ps, r1);
  net.register_params(pred_ps, r2);

  const int B = 2;
  std::vector<int8_t> obs(static_cast<size_t>(B) * view * view * 3);
  for (auto& o : obs) o = static_cast<int8_t>(rng.below(8));
  typename ride::intrinsic::RndNetT<double>::Cache t_cache, p_cache;
  std::vector<double> t_out(B * net.out_dim), p_out(B * net.out_dim);
  net.forward(target_ps, obs.data(), B, t_cache, t_out.data());

  auto loss = [&] {
    net.forward(pred_ps, obs.data(), B, p_cache, p_out.data());
    return ride::dyn::forward_dynamics_loss<double>(p_out.data(), t_out.data(), B, net.out_dim,
                                                    nullptr, nullptr);
  };
  loss();
  pred_ps.zero_grads();
  std::vector<double> dpred(p_out.size(), 0);
  ride::dyn::forward_dynamics_loss<double>(p_out.data(), t_out.data(), B, net.out_dim,
                                           dpred.data(), nullptr);
  net.backward(pred_ps, p_cache, dpred.data());
  return check_store(loss, pred_ps, "rnd.predictor");
}

struct NamedCase {
  const char* name;
  Report (*run)(uint64_t seed);
};

inline std::vector<NamedCase> all_cases() {
  return {
      {"dense", check_dense},
      {"elu", check_elu},
      {"conv", check_conv},
      {"lstm", check_lstm},
      {"softmax_xent", check_softmax_xent},
      {"policy_net", check_policy_net},
      {"dynamics_losses", check_dynamics_losses},
      {"rl_loss", check_rl_loss},
      {"rnd_predictor", check_rnd},
  };
}

}  // namespace gradcheck
