#include <doctest.h>

#include <gsemm/activation.hpp>
#include <gsemm/energy.hpp>
#include <gsemm/learning.hpp>
#include <gsemm/model.hpp>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace gsemm;
using testing_support::random_instance;
using testing_support::random_vector;

namespace {

struct LearningCase {
  ModelSpec spec;
  SynapseState syn;
  Signals current, target;
  Vector v_d;
  LearningConfig cfg;
};

LearningCase random_case(std::uint64_t seed) {
  auto in = random_instance(Variant::DSEM, seed, 5, 3);
  Rng rng(seed + 1000);
  LearningCase c{in.spec, in.syn, {}, {}, in.state.v_d, {}};
  c.current = {random_vector(rng, 5), random_vector(rng, 3)};
  c.target = {random_vector(rng, 5), random_vector(rng, 3)};
  c.cfg.tau_l_xi = rng.uniform(1.0, 10.0);
  c.cfg.tau_l_phi = rng.uniform(1.0, 10.0);
  c.cfg.beta_c = rng.uniform(0.1, 1.0);
  return c;
}

double energy_at(const Signals& s, const Vector& v_d, const SynapseState& syn, const ModelSpec& spec) {
  return energy_dsem(NetworkState{s.v_f, s.v_h, v_d}, syn, spec);
}

}  // namespace

TEST_SUITE("learning") {

TEST_CASE("updates are contrastive energy gradients") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const LearningCase c = random_case(seed);
    auto grad_xi = [&](const Signals& s) {
      return oracle::fd_gradient_matrix(
          [&](const Matrix& w) { return energy_at(s, c.v_d, SynapseState{w, c.syn.phi}, c.spec); },
          c.syn.xi, 1e-6);
    };
    auto grad_phi = [&](const Signals& s) {
      return oracle::fd_gradient_matrix(
          [&](const Matrix& w) { return energy_at(s, c.v_d, SynapseState{c.syn.xi, w}, c.spec); },
          c.syn.phi, 1e-6);
    };
    const Matrix want_xi = -grad_xi(c.target) + c.cfg.beta_c * grad_xi(c.current);
    const Matrix want_phi = -grad_phi(c.target) + c.cfg.beta_c * grad_phi(c.current);
    const Matrix got_xi = c.cfg.tau_l_xi * xi_update(c.current, c.target, c.v_d, c.syn, c.spec, c.cfg);
    const Matrix got_phi = c.cfg.tau_l_phi * phi_update(c.current, c.target, c.v_d, c.syn, c.spec, c.cfg);
    CHECK(oracle::max_abs_diff(got_xi, want_xi) / std::max(1.0, want_xi.cwiseAbs().maxCoeff()) < 1e-6);
    CHECK(oracle::max_abs_diff(got_phi, want_phi) / std::max(1.0, want_phi.cwiseAbs().maxCoeff()) < 1e-6);
  }
}

TEST_CASE("matching signals with beta 1 leave the synapses alone") {
  LearningCase c = random_case(3);
  c.cfg.beta_c = 1.0;
  CHECK(xi_update(c.current, c.current, c.v_d, c.syn, c.spec, c.cfg).cwiseAbs().maxCoeff() == 0.0);
  CHECK(phi_update(c.current, c.current, c.v_d, c.syn, c.spec, c.cfg).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("without the delay pathway the xi rule is a Hebbian difference") {
  LearningCase c = random_case(4);
  c.spec.alpha_c = 0.0;
  c.cfg.beta_c = 1.0;
  const Matrix d = c.cfg.tau_l_xi * xi_update(c.current, c.target, c.v_d, c.syn, c.spec, c.cfg);
  const Vector st = softmax_activation(c.target.v_h, c.spec.gamma);
  const Vector sc = softmax_activation(c.current.v_h, c.spec.gamma);
  Matrix expected(5, 3);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 3; ++j)
      expected(i, j) = std::sqrt(c.spec.alpha_s) * (c.target.v_f[i] * st[j] - c.current.v_f[i] * sc[j]);
  CHECK(oracle::max_abs_diff(d, expected) < 1e-14);
  Eigen::FullPivLU<Matrix> lu(d);
  lu.setThreshold(1e-10);
  CHECK(lu.rank() <= 2);
  CHECK(phi_update(c.current, c.target, c.v_d, c.syn, c.spec, c.cfg).isZero());
}

TEST_CASE("signals") {
  auto in = random_instance(Variant::DSEM, 5);
  const Signals cur = current_signals(in.state, in.syn, in.spec);
  CHECK(cur.v_f == in.state.v_f);
  CHECK(oracle::max_abs_diff(cur.v_h, oracle::dsem_hidden(in.state, in.syn.xi, in.syn.phi, in.spec)) < 1e-13);
  Rng rng(1);
  const Vector next = random_vector(rng, in.spec.n_f);
  NetworkState quiet = in.state;
  quiet.v_d.setZero();
  SynapseState other = in.syn;
  other.phi.setConstant(7.0);
  CHECK(target_signals(next, quiet, in.syn, in.spec).v_h == target_signals(next, quiet, other, in.spec).v_h);
  CHECK_THROWS_AS(target_signals(Vector::Ones(2), in.state, in.syn, in.spec), InvalidArgument);
}

TEST_CASE("config validation") {
  LearningConfig c;
  CHECK_NOTHROW(c.validate());
  c.beta_c = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.beta_c = 1.5;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.tau_l_phi = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.steps_per_memory = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("zero epochs return the initialization") {
  ModelSpec spec = ModelSpec::dsem(8, 5);
  LearningConfig cfg;
  cfg.epochs = 0;
  cfg.steps_per_memory = 10;
  cfg.init_range = 0.5;
  const Matrix ep = generate_memories(8, 3, 1);
  const TrainingResult a = train_online(ep, spec, cfg, 77);
  Rng rng(77);
  Matrix xi(8, 5), phi(5, 5);
  for (Index j = 0; j < 5; ++j)
    for (Index i = 0; i < 8; ++i) xi(i, j) = rng.uniform(-0.5, 0.5);
  for (Index j = 0; j < 5; ++j)
    for (Index i = 0; i < 5; ++i) phi(i, j) = rng.uniform(-0.5, 0.5);
  CHECK(a.syn.xi == xi);
  CHECK(a.syn.phi == phi);
  REQUIRE(a.snapshots.size() == 1);
  CHECK(a.snapshots[0].epoch == 0);
  CHECK(a.metrics.size() == 1);
}

TEST_CASE("training is deterministic and snapshots what was asked") {
  ModelSpec spec = ModelSpec::dsem(12, 6);
  LearningConfig cfg;
  cfg.epochs = 3;
  cfg.steps_per_memory = 50;
  cfg.snapshot_epochs = {0, 2};
  cfg.energy_samples_per_memory = 5;
  const Matrix ep = generate_memories(12, 3, 2);
  const TrainingResult a = train_online(ep, spec, cfg, 5);
  const TrainingResult b = train_online(ep, spec, cfg, 5);
  CHECK(a.syn.xi == b.syn.xi);
  CHECK(a.syn.phi == b.syn.phi);
  REQUIRE(a.snapshots.size() == 2);
  CHECK(a.snapshots[1].epoch == 2);
  CHECK(a.snapshots[1].energy_trace.size() == 15);
  CHECK(a.metrics.size() == 4);
  CHECK(a.snapshots[0].xi != a.syn.xi);
}

TEST_CASE("training argument checks") {
  LearningConfig cfg;
  cfg.epochs = 1;
  cfg.steps_per_memory = 5;
  const Matrix ep = generate_memories(8, 3, 1);
  CHECK_THROWS_AS(train_online(ep, ModelSpec::lisem(8, 5), cfg, 1), InvalidArgument);
  CHECK_THROWS_AS(train_online(ep, ModelSpec::dsem(9, 5), cfg, 1), InvalidArgument);
  cfg.learning_dt = 1e300;
  cfg.tau_l_xi = 1e-300;
  CHECK_THROWS_AS(train_online(ep, ModelSpec::dsem(8, 5), cfg, 1), TrainingFailure);
}

TEST_CASE("consolidation report on hand-built synapses") {
  const Matrix m = generate_memories(40, 3, 8);
  SynapseState syn;
  Rng rng(3);
  syn.xi = testing_support::random_matrix(rng, 40, 6, 0.1);
  syn.phi = testing_support::random_matrix(rng, 6, 6, 0.1);
  const Index cols[3] = {4, 1, 5};
  for (int n = 0; n < 3; ++n) syn.xi.col(cols[n]) = m.col(n);
  for (int n = 0; n < 3; ++n) syn.phi(cols[n], cols[(n + 1) % 3]) = 2.0;
  const ConsolidationReport r = analyze_consolidation(syn, m);
  CHECK(r.columns == std::vector<Index>{4, 1, 5});
  for (double a : r.alignment) CHECK(a == doctest::Approx(1.0));
  CHECK(r.distinct);
  CHECK(r.successor == std::vector<Index>{1, 2, 0});
  CHECK(r.successor_map_ok);

  syn.phi(cols[0], cols[2]) = 5.0;
  CHECK_FALSE(analyze_consolidation(syn, m).successor_map_ok);
}

}
