#pragma once

#include "ride/dynamics/models.hpp"
#include "ride/intrinsic/rewards.hpp"
#include "ride/nn/policy_net.hpp"

namespace ride::agent {

// Every network of one agent. The policy parameters are disjoint from the
// embedding/forward/inverse parameters; the RL loss can never touch the
// latter. Copyable: a copy is a parameter snapshot.
struct AgentModel {
  intrinsic::Method method = intrinsic::Method::ride;
  int view = 7;
  int n_actions = 7;

  nn::PolicyNet policy;
  nn::ParamStore policy_ps;

  dyn::EmbeddingNet embedding;
  nn::ParamStore embedding_ps;
  dyn::ForwardModel forward_model;
  nn::ParamStore forward_ps;
  dyn::InverseModel inverse_model;
  nn::ParamStore inverse_ps;

  intrinsic::RndPair rnd;

  int embed_dim() const { return embedding.dim(); }

  void init(int view_size, intrinsic::Method m, uint64_t seed, int actions = 7) {
    method = m;
    view = view_size;
    n_actions = actions;
    Rng root(mix_seed(seed, 0x1e77ull));

    policy.configure(view, n_actions);
    Rng pol_rng = root.split(1);
    policy.register_params(policy_ps, pol_rng);

    embedding.configure(view);
    Rng emb_rng = root.split(2);
    embedding.register_params(embedding_ps, emb_rng);

    forward_model.configure(embedding.dim(), n_actions);
    Rng fw_rng = root.split(3);
    forward_model.register_params(forward_ps, fw_rng);

    inverse_model.configure(embedding.dim(), n_actions);
    Rng inv_rng = root.split(4);
    inverse_model.register_params(inverse_ps, inv_rng);

    Rng rnd_rng = root.split(5);
    rnd.init(view, rnd_rng);
  }
};

}  // namespace ride::agent
