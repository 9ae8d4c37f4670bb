#include <doctest.h>

#include <gsemm/activation.hpp>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace gsemm;
using testing_support::random_vector;

TEST_SUITE("activation") {

TEST_CASE("softmax normalizes and survives huge inputs") {
  Vector v(3);
  v << 1000.0, 1001.0, -5000.0;
  const Vector s = softmax_activation(v, 1.0);
  CHECK(s.allFinite());
  CHECK(s.sum() == doctest::Approx(1.0));
  CHECK(s[1] / s[0] == doctest::Approx(std::exp(1.0)));
  CHECK(s[2] == 0.0);
  CHECK_THROWS_AS(softmax_activation(Vector(), 1.0), InvalidArgument);
}

TEST_CASE("activations match direct formulas") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector v = random_vector(rng, 5, 3.0);
    const double g = rng.uniform(0.3, 2.0);
    for (Activation a : {Activation::Identity, Activation::Tanh, Activation::Softmax})
      CHECK(oracle::max_abs_diff(activate(a, v, g), oracle::activate_ref(a, v, g)) < 1e-14);
  }
}

TEST_CASE("lagrangian values") {
  Rng rng(12);
  const Vector v = random_vector(rng, 6, 2.0);
  for (Activation a : {Activation::Identity, Activation::Tanh, Activation::Softmax}) {
    const Lagrangian l(a, 1.3);
    CHECK(l.value(v) == doctest::Approx(oracle::lagrangian(a, v, 1.3)).epsilon(1e-13));
  }
  // log cosh must not overflow where cosh itself would
  const Lagrangian t(Activation::Tanh, 1.0);
  Vector big(1);
  big << 1000.0;
  CHECK(t.value(big) == doctest::Approx(1000.0 - std::log(2.0)));
}

TEST_CASE("gradient of the lagrangian is the activation") {
  Rng rng(13);
  for (Activation a : {Activation::Identity, Activation::Tanh, Activation::Softmax}) {
    for (int rep = 0; rep < 10; ++rep) {
      const Vector v = random_vector(rng, 5, 2.0);
      const Lagrangian l(a, 0.8);
      const Vector fd = oracle::fd_gradient([&](const Vector& x) { return l.value(x); }, v, 1e-5);
      CHECK(oracle::max_abs_diff(l.gradient(v), fd) < 1e-8);
    }
  }
}

TEST_CASE("hessian matches finite differences of the gradient") {
  Rng rng(14);
  for (Activation a : {Activation::Identity, Activation::Tanh, Activation::Softmax}) {
    const Lagrangian l(a, 1.1);
    const Vector v = random_vector(rng, 4, 1.5);
    const Matrix h = l.hessian(v);
    for (Index j = 0; j < v.size(); ++j) {
      Vector p = v, m = v;
      p[j] += 1e-5;
      m[j] -= 1e-5;
      const Vector col = (l.gradient(p) - l.gradient(m)) / 2e-5;
      CHECK(oracle::max_abs_diff(h.col(j), col) < 1e-8);
    }
    CHECK((h - h.transpose()).norm() < 1e-15);
  }
}

TEST_CASE("hessian forms are non-negative and consistent") {
  Rng rng(15);
  for (Activation a : {Activation::Identity, Activation::Tanh, Activation::Softmax}) {
    const Lagrangian l(a, 1.7);
    for (int rep = 0; rep < 50; ++rep) {
      const Vector v = random_vector(rng, 6, 4.0);
      const Vector x = random_vector(rng, 6, 3.0);
      const double q = l.hessian_form(v, x);
      CHECK(q >= 0.0);
      CHECK(q == doctest::Approx(x.dot(l.hessian(v) * x)).epsilon(1e-10));
      CHECK(oracle::max_abs_diff(l.hessian_apply(v, x), l.hessian(v) * x) < 1e-12);
    }
  }
}

TEST_CASE("softmax form is exactly zero along the all-ones direction") {
  const Lagrangian l(Activation::Softmax, 1.0);
  Rng rng(16);
  const Vector v = random_vector(rng, 5);
  CHECK(l.hessian_form(v, Vector::Ones(5)) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("lagrangian pair follows the variant") {
  const auto lisem = LagrangianPair::for_spec(ModelSpec::lisem(4, 2));
  CHECK(lisem.l_f.kind() == Activation::Tanh);
  CHECK(lisem.l_h.kind() == Activation::Identity);
  const auto dsem = LagrangianPair::for_spec(ModelSpec::dsem(4, 2));
  CHECK(dsem.l_f.kind() == Activation::Identity);
  CHECK(dsem.l_h.kind() == Activation::Softmax);
}

}
