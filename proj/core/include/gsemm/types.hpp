#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gsemm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class Variant { FullGSEMM, LISEM, DSEM };

enum class Activation { Identity, Tanh, Softmax };

std::string_view to_string(Variant v);
std::string_view to_string(Activation a);
Variant parse_variant(std::string_view name);
Activation parse_activation(std::string_view name);

// Error types. Everything derives from a std exception so callers that only
// care about "something went wrong" can catch the standard base.

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class NumericalBlowup : public std::runtime_error {
 public:
  NumericalBlowup(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, double residual, std::int64_t iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  std::int64_t iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  std::int64_t iterations_;
};

class TrainingFailure : public std::runtime_error {
 public:
  TrainingFailure(const std::string& what, int epoch)
      : std::runtime_error(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

/// Variant selector plus every scalar parameter of the model.
///
/// For the diabatic variants (LISEM, DSEM) the activations are fixed by the
/// variant and `sigma_f` / `sigma_h` are ignored; `tau_h` only matters for
/// FullGSEMM but still has to respect the timescale ordering.
struct ModelSpec {
  Variant variant = Variant::LISEM;
  Index n_f = 100;
  Index n_h = 7;
  double alpha_s = 0.05;
  double alpha_c = 4.9;
  double gamma = 1.0;
  double tau_f = 1.0;
  double tau_h = 1.0;
  double tau_d = 100.0;
  Activation sigma_f = Activation::Tanh;
  Activation sigma_h = Activation::Identity;

  /// Throws InvalidArgument when a field violates its invariant.
  void validate() const;

  bool diabatic() const noexcept { return variant != Variant::FullGSEMM; }

  /// Feature / hidden activations actually in effect for this variant.
  Activation feature_activation() const noexcept;
  Activation hidden_activation() const noexcept;

  static ModelSpec lisem(Index n_f, Index n_h);
  static ModelSpec dsem(Index n_f, Index n_h);
};

struct SynapseState {
  Matrix xi;   // n_f x n_h, column j is the pattern stored by hidden unit j
  Matrix phi;  // n_h x n_h, phi(k, j) is the delay pathway from hidden k to hidden j

  void validate(const ModelSpec& spec) const;
};

struct NetworkState {
  Vector v_f;
  Vector v_h;
  Vector v_d;

  bool all_finite() const;
};

}  // namespace gsemm
