#pragma once

#include <gsemm/model.hpp>
#include <gsemm/random.hpp>
#include <gsemm/types.hpp>

namespace testing_support {

using namespace gsemm;

inline Vector random_vector(Rng& rng, Index n, double scale = 1.0) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.uniform(-scale, scale);
  return v;
}

inline Matrix random_matrix(Rng& rng, Index r, Index c, double scale = 1.0) {
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = rng.uniform(-scale, scale);
  return m;
}

struct Instance {
  ModelSpec spec;
  SynapseState syn;
  NetworkState state;
};

// Small random network with every quantity O(1).
inline Instance random_instance(Variant variant, std::uint64_t seed, Index n_f = 6, Index n_h = 4) {
  Rng rng(seed);
  Instance in;
  in.spec = variant == Variant::DSEM ? ModelSpec::dsem(n_f, n_h) : ModelSpec::lisem(n_f, n_h);
  in.spec.variant = variant;
  if (variant == Variant::FullGSEMM) {
    in.spec.sigma_f = Activation::Tanh;
    in.spec.sigma_h = Activation::Softmax;
    in.spec.tau_h = 0.5;
  }
  in.spec.alpha_s = rng.uniform(0.2, 1.5);
  in.spec.alpha_c = rng.uniform(0.2, 2.0);
  in.spec.gamma = rng.uniform(0.5, 1.5);
  in.spec.tau_f = rng.uniform(0.5, 2.0);
  in.spec.tau_d = rng.uniform(20.0, 200.0);
  in.syn.xi = random_matrix(rng, n_f, n_h, 0.6);
  in.syn.phi = random_matrix(rng, n_h, n_h, 0.6);
  in.state.v_f = random_vector(rng, n_f);
  in.state.v_h = random_vector(rng, n_h);
  in.state.v_d = random_vector(rng, n_f);
  return in;
}

}  // namespace testing_support
