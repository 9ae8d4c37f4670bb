#include <doctest.h>

#include <set>

#include <gsemm/model.hpp>
#include <gsemm/random.hpp>

using namespace gsemm;

TEST_SUITE("model") {

TEST_CASE("memories are +/-1, deterministic per seed") {
  const Matrix a = generate_memories(100, 7, 42);
  const Matrix b = generate_memories(100, 7, 42);
  const Matrix c = generate_memories(100, 7, 43);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.rows() == 100);
  CHECK(a.cols() == 7);
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) CHECK(std::abs(a(i, j)) == 1.0);
  // fair coin: 700 draws should not be wildly unbalanced
  CHECK(std::abs(a.sum()) < 100.0);
}

TEST_CASE("memories reject bad sizes") {
  CHECK_THROWS_AS(generate_memories(0, 3, 1), InvalidArgument);
  CHECK_THROWS_AS(generate_memories(10, 0, 1), InvalidArgument);
}

TEST_CASE("phi scaling") {
  const EpisodeGraph g(2, {{0, 1}});
  CHECK(build_phi(g, 1.0)(0, 1) == doctest::Approx(1.0));
  CHECK(build_phi(g, 0.05)(0, 1) == doctest::Approx(4.4721359549995796).epsilon(1e-14));
  CHECK(build_phi(g, 4.0)(0, 1) == doctest::Approx(0.5));
  const Matrix p = build_phi(g, 4.0);
  CHECK(p(1, 0) == 0.0);
  CHECK(p(0, 0) == 0.0);
  CHECK(p(1, 1) == 0.0);
}

TEST_CASE("phi nonzeros sit exactly on edges") {
  const EpisodeGraph g = build_episode_graph({{0, 1, 2}, {3, 4, 5, 6}});
  const Matrix p = build_phi(g, 0.05);
  for (Index k = 0; k < 7; ++k)
    for (Index j = 0; j < 7; ++j) {
      if (g.has_edge(k, j))
        CHECK(p(k, j) == doctest::Approx(1.0 / std::sqrt(0.05)));
      else
        CHECK(p(k, j) == 0.0);
    }
  CHECK(g.has_edge(2, 0));
  CHECK(g.has_edge(6, 3));
  CHECK_FALSE(g.has_edge(2, 3));
  CHECK(g.edges().size() == 7);
}

TEST_CASE("phi rejects non-positive alpha_s") {
  const EpisodeGraph g(2, {{0, 1}});
  CHECK_THROWS_AS(build_phi(g, 0.0), InvalidArgument);
  CHECK_THROWS_AS(build_phi(g, -1.0), InvalidArgument);
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(EpisodeGraph(3, {{1, 1}}), InvalidArgument);
  CHECK_THROWS_AS(EpisodeGraph(3, {{0, 3}}), InvalidArgument);
  CHECK_THROWS_AS(EpisodeGraph(3, {{-1, 0}}), InvalidArgument);
  CHECK_THROWS_AS(build_episode_graph({{0, 1, 0}}), InvalidArgument);
  CHECK_THROWS_AS(build_episode_graph({{0, 1}, {1, 2}}), InvalidArgument);
  CHECK_THROWS_AS(build_episode_graph({{4}}), InvalidArgument);
  CHECK_THROWS_AS(build_episode_graph({{0, 5}}, 3), InvalidArgument);
  const EpisodeGraph g = build_episode_graph({{0, 1}}, 5);
  CHECK(g.n_nodes() == 5);
  CHECK(g.adjacency().sum() == 2.0);
}

TEST_CASE("preload stores memories as columns") {
  const Matrix m = generate_memories(20, 3, 5);
  const SynapseState syn = preload(m, build_episode_graph({{0, 1, 2}}), 0.5);
  CHECK(syn.xi == m);
  CHECK(syn.phi(0, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(preload(m, build_episode_graph({{0, 1}}), 0.5), InvalidArgument);
}

TEST_CASE("model parameter validation") {
  ModelSpec s = ModelSpec::lisem(100, 7);
  CHECK_NOTHROW(s.validate());
  CHECK(s.alpha_s == 0.05);
  CHECK(s.alpha_c == 4.9);
  CHECK(ModelSpec::dsem(100, 7).alpha_s == 1.0);
  s.tau_d = 0.5;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = ModelSpec::lisem(0, 7);
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = ModelSpec::lisem(10, 7);
  s.alpha_s = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = ModelSpec::lisem(10, 7);
  s.gamma = -1.0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("variant activations") {
  CHECK(ModelSpec::lisem(4, 2).feature_activation() == Activation::Tanh);
  CHECK(ModelSpec::lisem(4, 2).hidden_activation() == Activation::Identity);
  CHECK(ModelSpec::dsem(4, 2).feature_activation() == Activation::Identity);
  CHECK(ModelSpec::dsem(4, 2).hidden_activation() == Activation::Softmax);
}

TEST_CASE("name round trips") {
  for (Variant v : {Variant::FullGSEMM, Variant::LISEM, Variant::DSEM})
    CHECK(parse_variant(to_string(v)) == v);
  for (Activation a : {Activation::Identity, Activation::Tanh, Activation::Softmax})
    CHECK(parse_activation(to_string(a)) == a);
  CHECK_THROWS_AS(parse_variant("hopfield"), InvalidArgument);
  CHECK_THROWS_AS(parse_activation("relu"), InvalidArgument);
}

TEST_CASE("rng helpers") {
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto x = r.below(7);
    CHECK(x < 7);
    seen.insert(x);
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(seen.size() == 7);
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
}

}
