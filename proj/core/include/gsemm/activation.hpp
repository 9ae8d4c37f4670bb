#pragma once

#include "gsemm/types.hpp"

namespace gsemm {

/// Elementwise tanh(gamma * v).
Vector tanh_activation(const Vector& v, double gamma);

/// exp(gamma v_i) / sum_j exp(gamma v_j), max-shifted so large inputs cannot overflow.
Vector softmax_activation(const Vector& v, double gamma);

/// Scalar potential L whose gradient is a layer activation.
///
///   identity: L(v) = |v|^2 / 2
///   tanh:     L(v) = sum_i log(cosh(gamma v_i)) / gamma
///   softmax:  L(v) = log(sum_i exp(gamma v_i)) / gamma
///
/// All three Hessians are positive semi-definite.
class Lagrangian {
 public:
  Lagrangian(Activation kind, double gamma) : kind_(kind), gamma_(gamma) {}

  Activation kind() const noexcept { return kind_; }
  double gamma() const noexcept { return gamma_; }

  double value(const Vector& v) const;
  Vector gradient(const Vector& v) const;  // the activation itself
  Matrix hessian(const Vector& v) const;

  /// x^T H(v) x without forming H; never negative by construction.
  double hessian_form(const Vector& v, const Vector& x) const;

  /// H(v) x without forming H.
  Vector hessian_apply(const Vector& v, const Vector& x) const;

 private:
  Activation kind_;
  double gamma_;
};

struct LagrangianPair {
  Lagrangian l_f;
  Lagrangian l_h;

  static LagrangianPair for_spec(const ModelSpec& spec);
};

Vector activate(Activation kind, const Vector& v, double gamma);

}  // namespace gsemm
