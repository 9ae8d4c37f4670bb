#include "gsemm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gsemm/activation.hpp"

namespace gsemm {

namespace {

void check_length(const Vector& v, Index n, const char* name) {
  if (v.size() != n) {
    std::ostringstream os;
    os << name << " has length " << v.size() << ", expected " << n;
    throw InvalidArgument(os.str());
  }
}

}  // namespace

void check_shapes(const NetworkState& state, const SynapseState& syn, const ModelSpec& spec) {
  syn.validate(spec);
  check_length(state.v_f, spec.n_f, "v_f");
  check_length(state.v_d, spec.n_f, "v_d");
  if (!spec.diabatic()) check_length(state.v_h, spec.n_h, "v_h");
}

double delay_gain(const ModelSpec& spec) {
  return spec.variant == Variant::LISEM ? spec.alpha_c / std::sqrt(spec.alpha_s) : spec.alpha_c;
}

Vector delay_input(const Vector& v_d, const SynapseState& syn, const ModelSpec& spec) {
  return delay_gain(spec) * (syn.phi.transpose() * (syn.xi.transpose() * v_d));
}

Vector hidden_drive(const Vector& v_f, const Vector& v_d, const SynapseState& syn,
                    const ModelSpec& spec) {
  const Vector s_f = activate(spec.feature_activation(), v_f, spec.gamma);
  return std::sqrt(spec.alpha_s) * (syn.xi.transpose() * s_f) + delay_input(v_d, syn, spec);
}

StateDerivative gsemm_rhs(const NetworkState& state, const SynapseState& syn,
                          const ModelSpec& spec, Activation sigma_f, Activation sigma_h) {
  if (spec.variant != Variant::FullGSEMM)
    throw InvalidArgument("gsemm_rhs requires the FullGSEMM variant");
  check_shapes(state, syn, spec);
  const double root_s = std::sqrt(spec.alpha_s);
  const Vector s_f = activate(sigma_f, state.v_f, spec.gamma);
  const Vector s_h = activate(sigma_h, state.v_h, spec.gamma);

  StateDerivative d;
  d.dv_f = (root_s * (syn.xi * s_h) - state.v_f) / spec.tau_f;
  d.dv_h = (root_s * (syn.xi.transpose() * s_f) +
            spec.alpha_c * (syn.phi.transpose() * (syn.xi.transpose() * state.v_d)) - state.v_h) /
           spec.tau_h;
  d.dv_d = (s_f - state.v_d) / spec.tau_d;
  return d;
}

StateDerivative gsemm_rhs(const NetworkState& state, const SynapseState& syn,
                          const ModelSpec& spec) {
  return gsemm_rhs(state, syn, spec, spec.sigma_f, spec.sigma_h);
}

StateDerivative lisem_rhs(const NetworkState& state, const SynapseState& syn,
                          const ModelSpec& spec) {
  if (spec.variant != Variant::LISEM) throw InvalidArgument("lisem_rhs requires LISEM");
  check_shapes(state, syn, spec);
  const Vector t = tanh_activation(state.v_f, spec.gamma);
  const Vector hidden = spec.alpha_s * (syn.xi.transpose() * t) +
                        spec.alpha_c * (syn.phi.transpose() * (syn.xi.transpose() * state.v_d));

  StateDerivative d;
  d.dv_f = (syn.xi * hidden - state.v_f) / spec.tau_f;
  d.dv_d = (t - state.v_d) / spec.tau_d;
  return d;
}

StateDerivative dsem_rhs(const NetworkState& state, const SynapseState& syn,
                         const ModelSpec& spec) {
  if (spec.variant != Variant::DSEM) throw InvalidArgument("dsem_rhs requires DSEM");
  check_shapes(state, syn, spec);
  const Vector h = hidden_drive(state.v_f, state.v_d, syn, spec);
  const Vector s_h = softmax_activation(h, spec.gamma);

  StateDerivative d;
  d.dv_f = (std::sqrt(spec.alpha_s) * (syn.xi * s_h) - state.v_f) / spec.tau_f;
  d.dv_d = (state.v_f - state.v_d) / spec.tau_d;
  return d;
}

StateDerivative model_rhs(const NetworkState& state, const SynapseState& syn,
                          const ModelSpec& spec) {
  switch (spec.variant) {
    case Variant::FullGSEMM: return gsemm_rhs(state, syn, spec);
    case Variant::LISEM: return lisem_rhs(state, syn, spec);
    case Variant::DSEM: return dsem_rhs(state, syn, spec);
  }
  throw InvalidArgument("unknown variant");
}

NetworkState with_derived_hidden(NetworkState state, const SynapseState& syn,
                                 const ModelSpec& spec) {
  if (spec.diabatic()) state.v_h = hidden_drive(state.v_f, state.v_d, syn, spec);
  return state;
}

Vector delay_convolution_reference(std::span<const Vector> feature_history, double sample_dt,
                                   double tau_d, double t,
                                   const std::optional<Vector>& initial) {
  if (feature_history.empty()) throw InvalidArgument("empty feature history");
  if (!(sample_dt > 0.0) || !(tau_d > 0.0)) throw InvalidArgument("dt and tau_d must be positive");
  if (t < 0.0) throw InvalidArgument("evaluation time must be non-negative");

  const auto last = static_cast<double>(feature_history.size() - 1);
  const double t_index = t / sample_dt;
  if (t_index > last + 1e-9) throw InvalidArgument("history does not cover evaluation time");
  const auto n_t = static_cast<std::size_t>(std::llround(std::min(t_index, last)));

  const double horizon = 20.0 * tau_d;
  const auto n_x = std::min<std::size_t>(
      n_t, static_cast<std::size_t>(std::floor(horizon / sample_dt + 1e-9)));

  const Vector& first = feature_history.front();
  Vector acc = Vector::Zero(first.size());
  for (std::size_t j = 0; j <= n_x; ++j) {
    const double w = (j == 0 || j == n_x) ? 0.5 : 1.0;
    acc += w * std::exp(-static_cast<double>(j) * sample_dt / tau_d) * feature_history[n_t - j];
  }
  acc *= sample_dt / tau_d;
  if (n_x == 0) acc.setZero();

  // Kernel mass reaching back before t = 0 carries the initial delay state.
  if (n_x == n_t) {
    const Vector& v0 = initial ? *initial : first;
    if (v0.size() != first.size()) throw InvalidArgument("initial delay state has the wrong length");
    acc += std::exp(-static_cast<double>(n_t) * sample_dt / tau_d) * v0;
  }
  return acc;
}

}  // namespace gsemm
