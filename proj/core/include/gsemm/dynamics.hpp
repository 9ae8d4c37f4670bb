#pragma once

#include <optional>
#include <span>

#include "gsemm/types.hpp"

namespace gsemm {

/// Time derivatives of the integrated state. `dv_h` is empty for the
/// diabatic variants, whose hidden layer is not integrated.
struct StateDerivative {
  Vector dv_f;
  Vector dv_h;
  Vector dv_d;
};

/// Gain on the delay pathway as it enters the hidden drive.
///
/// FullGSEMM and DSEM use alpha_c. The LISEM equations carry alpha_c on the
/// full Xi Phi^T Xi^T V_d term, i.e. after the sqrt(alpha_s) read-out, which
/// is the same as a hidden-layer gain of alpha_c / sqrt(alpha_s).
double delay_gain(const ModelSpec& spec);

/// Hidden input from the delay signal: gain * Phi^T Xi^T V_d.
Vector delay_input(const Vector& v_d, const SynapseState& syn, const ModelSpec& spec);

/// Diabatic hidden state: sqrt(alpha_s) Xi^T sigma_f(V_f) + delay_input(V_d).
Vector hidden_drive(const Vector& v_f, const Vector& v_d, const SynapseState& syn,
                    const ModelSpec& spec);

/// Full three-population GSEMM right-hand side with explicit activations.
StateDerivative gsemm_rhs(const NetworkState& state, const SynapseState& syn,
                          const ModelSpec& spec, Activation sigma_f, Activation sigma_h);

/// Same, with the activations stored in `spec`.
StateDerivative gsemm_rhs(const NetworkState& state, const SynapseState& syn,
                          const ModelSpec& spec);

/// tau_f dV_f/dt = alpha_s Xi Xi^T tanh(gamma V_f) + alpha_c Xi Phi^T Xi^T V_d - V_f
/// tau_d dV_d/dt = tanh(gamma V_f) - V_d
StateDerivative lisem_rhs(const NetworkState& state, const SynapseState& syn,
                          const ModelSpec& spec);

/// h = sqrt(alpha_s) Xi^T V_f + alpha_c Phi^T Xi^T V_d
/// tau_f dV_f/dt = sqrt(alpha_s) Xi softmax_gamma(h) - V_f
/// tau_d dV_d/dt = V_f - V_d
StateDerivative dsem_rhs(const NetworkState& state, const SynapseState& syn,
                         const ModelSpec& spec);

/// Dispatches on spec.variant.
StateDerivative model_rhs(const NetworkState& state, const SynapseState& syn,
                          const ModelSpec& spec);

/// Returns `state` with v_h recomputed from (v_f, v_d) for diabatic variants;
/// FullGSEMM states are returned unchanged.
NetworkState with_derived_hidden(NetworkState state, const SynapseState& syn,
                                 const ModelSpec& spec);

/// Throws InvalidArgument unless every vector/matrix shape agrees with spec.
void check_shapes(const NetworkState& state, const SynapseState& syn, const ModelSpec& spec);

/// Direct quadrature of the exponential delay kernel,
///   (1/tau_d) * integral_0^inf s(t - x) exp(-x / tau_d) dx,
/// over uniformly spaced samples s(0), s(dt), ... of sigma_f(V_f).
/// Trapezoid rule, truncated at min(t, 20 tau_d). When the kernel reaches
/// back past time 0 the remaining mass exp(-t / tau_d) multiplies
/// `initial` (the delay state at t = 0), or the first sample if none is given.
Vector delay_convolution_reference(std::span<const Vector> feature_history, double sample_dt,
                                   double tau_d, double t,
                                   const std::optional<Vector>& initial = std::nullopt);

}  // namespace gsemm
