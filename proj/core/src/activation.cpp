#include "gsemm/activation.hpp"

#include <cmath>

namespace gsemm {

namespace {

// log(cosh(x)) without overflow for large |x|.
double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

double log_sum_exp(const Vector& z) {
  const double m = z.maxCoeff();
  return m + std::log((z.array() - m).exp().sum());
}

}  // namespace

Vector tanh_activation(const Vector& v, double gamma) { return (gamma * v.array()).tanh(); }

Vector softmax_activation(const Vector& v, double gamma) {
  if (v.size() == 0) throw InvalidArgument("softmax of an empty vector");
  const Vector z = gamma * v;
  const Vector e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

Vector activate(Activation kind, const Vector& v, double gamma) {
  switch (kind) {
    case Activation::Identity: return v;
    case Activation::Tanh: return tanh_activation(v, gamma);
    case Activation::Softmax: return softmax_activation(v, gamma);
  }
  return v;
}

double Lagrangian::value(const Vector& v) const {
  switch (kind_) {
    case Activation::Identity: return 0.5 * v.squaredNorm();
    case Activation::Tanh: {
      double sum = 0.0;
      for (Index i = 0; i < v.size(); ++i) sum += log_cosh(gamma_ * v[i]);
      return sum / gamma_;
    }
    case Activation::Softmax: return log_sum_exp(gamma_ * v) / gamma_;
  }
  return 0.0;
}

Vector Lagrangian::gradient(const Vector& v) const { return activate(kind_, v, gamma_); }

Matrix Lagrangian::hessian(const Vector& v) const {
  switch (kind_) {
    case Activation::Identity: return Matrix::Identity(v.size(), v.size());
    case Activation::Tanh: {
      const Vector t = tanh_activation(v, gamma_);
      return (gamma_ * (1.0 - t.array().square())).matrix().asDiagonal();
    }
    case Activation::Softmax: {
      const Vector s = softmax_activation(v, gamma_);
      Matrix h = -gamma_ * s * s.transpose();
      h.diagonal() += gamma_ * s;
      return h;
    }
  }
  return {};
}

double Lagrangian::hessian_form(const Vector& v, const Vector& x) const {
  switch (kind_) {
    case Activation::Identity: return x.squaredNorm();
    case Activation::Tanh: {
      const Vector t = tanh_activation(v, gamma_);
      return gamma_ * ((1.0 - t.array().square()) * x.array().square()).sum();
    }
    case Activation::Softmax: {
      // gamma * Var_s(x): a weighted sum of squares, so it cannot round below zero.
      const Vector s = softmax_activation(v, gamma_);
      const double mean = s.dot(x);
      return gamma_ * (s.array() * (x.array() - mean).square()).sum();
    }
  }
  return 0.0;
}

Vector Lagrangian::hessian_apply(const Vector& v, const Vector& x) const {
  switch (kind_) {
    case Activation::Identity: return x;
    case Activation::Tanh: {
      const Vector t = tanh_activation(v, gamma_);
      return gamma_ * ((1.0 - t.array().square()) * x.array()).matrix();
    }
    case Activation::Softmax: {
      const Vector s = softmax_activation(v, gamma_);
      return gamma_ * (s.array() * (x.array() - s.dot(x))).matrix();
    }
  }
  return x;
}

LagrangianPair LagrangianPair::for_spec(const ModelSpec& spec) {
  return {Lagrangian(spec.feature_activation(), spec.gamma),
          Lagrangian(spec.hidden_activation(), spec.gamma)};
}

}  // namespace gsemm
