#include "gsemm/energy.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gsemm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double layer_term(const Lagrangian& lag, const Vector& v) {
  return v.dot(lag.gradient(v)) - lag.value(v);
}

}  // namespace

double energy_gsemm(const NetworkState& state, const SynapseState& syn, const ModelSpec& spec,
                    const LagrangianPair& lag) {
  syn.validate(spec);
  if (state.v_f.size() != spec.n_f || state.v_d.size() != spec.n_f ||
      state.v_h.size() != spec.n_h)
    throw InvalidArgument("state shape does not match model");

  const Vector s_f = lag.l_f.gradient(state.v_f);
  const Vector s_h = lag.l_h.gradient(state.v_h);
  return layer_term(lag.l_f, state.v_f) + layer_term(lag.l_h, state.v_h) -
         std::sqrt(spec.alpha_s) * s_f.dot(syn.xi * s_h) -
         delay_gain(spec) * state.v_d.dot(syn.xi * (syn.phi * s_h));
}

EnergyReport energy_lisem(const NetworkState& state, const SynapseState& syn,
                          const ModelSpec& spec) {
  if (spec.variant != Variant::LISEM) throw InvalidArgument("energy_lisem requires LISEM");
  check_shapes(state, syn, spec);

  const Lagrangian l_f(Activation::Tanh, spec.gamma);
  const Vector t = tanh_activation(state.v_f, spec.gamma);
  const Vector xt = syn.xi.transpose() * t;
  const Vector pd = syn.phi.transpose() * (syn.xi.transpose() * state.v_d);

  // Completing the square in the diabatic V_h puts a minus sign on both
  // delay terms; with the plus signs the sequence term would push V_f away
  // from the successor memory that the dynamics move towards.
  EnergyReport r;
  r.e_assoc = state.v_f.dot(t) - l_f.value(state.v_f) - 0.5 * spec.alpha_s * xt.squaredNorm();
  r.e_seq = -spec.alpha_c * xt.dot(pd);
  r.e_c = -(spec.alpha_c * spec.alpha_c / (2.0 * spec.alpha_s)) * pd.squaredNorm();
  r.total = r.e_assoc + r.e_seq + r.e_c;
  r.f_rate = 0.0;
  r.g_rate = 0.0;
  return r;
}

double energy_dsem(const NetworkState& state, const SynapseState& syn, const ModelSpec& spec) {
  if (spec.variant != Variant::DSEM) throw InvalidArgument("energy_dsem requires DSEM");
  check_shapes(state, syn, spec);
  if (state.v_h.size() != spec.n_h) throw InvalidArgument("v_h has wrong length");

  const Lagrangian l_h(Activation::Softmax, spec.gamma);
  const Vector s_h = l_h.gradient(state.v_h);
  const Vector xs = syn.xi * s_h;
  return 0.5 * state.v_f.squaredNorm() + state.v_h.dot(s_h) - l_h.value(state.v_h) -
         std::sqrt(spec.alpha_s) * state.v_f.dot(xs) -
         spec.alpha_c * state.v_d.dot(syn.xi * (syn.phi * s_h));
}

double model_energy(const NetworkState& state, const SynapseState& syn, const ModelSpec& spec) {
  switch (spec.variant) {
    case Variant::FullGSEMM: return energy_gsemm(state, syn, spec, LagrangianPair::for_spec(spec));
    case Variant::LISEM: return energy_lisem(state, syn, spec).total;
    case Variant::DSEM: return energy_dsem(with_derived_hidden(state, syn, spec), syn, spec);
  }
  throw InvalidArgument("unknown variant");
}

EnergyRates energy_rate_terms(const NetworkState& state, const StateDerivative& deriv,
                              const SynapseState& syn, const ModelSpec& spec,
                              const LagrangianPair& lag) {
  check_shapes(state, syn, spec);
  if (deriv.dv_f.size() != spec.n_f || deriv.dv_d.size() != spec.n_f)
    throw InvalidArgument("derivative shape does not match model");

  const Vector v_h = spec.diabatic() ? hidden_drive(state.v_f, state.v_d, syn, spec) : state.v_h;

  EnergyRates r;
  r.f_rate = -spec.tau_f * lag.l_f.hessian_form(state.v_f, deriv.dv_f);
  if (!spec.diabatic()) {
    if (deriv.dv_h.size() != spec.n_h) throw InvalidArgument("dv_h has wrong length");
    r.f_rate -= spec.tau_h * lag.l_h.hessian_form(v_h, deriv.dv_h);
  }
  const Vector s_h = lag.l_h.gradient(v_h);
  r.g_rate = -delay_gain(spec) * s_h.dot(syn.phi.transpose() * (syn.xi.transpose() * deriv.dv_d));
  return r;
}

EnergyReport energy_report(const NetworkState& state, const SynapseState& syn,
                           const ModelSpec& spec) {
  const LagrangianPair lag = LagrangianPair::for_spec(spec);
  const NetworkState s = with_derived_hidden(state, syn, spec);

  EnergyReport r;
  if (spec.variant == Variant::LISEM) {
    r = energy_lisem(s, syn, spec);
  } else {
    r.total = spec.variant == Variant::DSEM ? energy_dsem(s, syn, spec)
                                            : energy_gsemm(s, syn, spec, lag);
    r.e_assoc = r.e_seq = r.e_c = kNaN;
  }
  const EnergyRates rates = energy_rate_terms(s, model_rhs(s, syn, spec), syn, spec, lag);
  r.f_rate = rates.f_rate;
  r.g_rate = rates.g_rate;
  return r;
}

FixedPointResult find_instantaneous_fixed_point(const NetworkState& start,
                                                const SynapseState& syn, const ModelSpec& spec,
                                                const Vector& frozen_v_d,
                                                const FixedPointOptions& options) {
  if (!(options.step > 0.0) || !(options.tol > 0.0))
    throw InvalidArgument("fixed-point step and tol must be positive");

  NetworkState s = start;
  s.v_d = frozen_v_d;
  s = with_derived_hidden(std::move(s), syn, spec);
  check_shapes(s, syn, spec);

  auto residual_of = [&](const StateDerivative& d) {
    double r = d.dv_f.size() ? d.dv_f.cwiseAbs().maxCoeff() : 0.0;
    if (!spec.diabatic() && d.dv_h.size()) r = std::max(r, d.dv_h.cwiseAbs().maxCoeff());
    return r;
  };

  FixedPointResult result;
  for (std::int64_t it = 0;; ++it) {
    const StateDerivative d = model_rhs(s, syn, spec);
    const double residual = residual_of(d);
    if (!std::isfinite(residual)) {
      throw ConvergenceFailure("fixed-point iteration diverged", residual, it);
    }
    if (residual < options.tol) {
      result.state = std::move(s);
      result.iterations = it;
      result.residual = residual;
      return result;
    }
    if (it >= options.max_iters) {
      std::ostringstream os;
      os << "fixed-point iteration did not converge in " << options.max_iters
         << " iterations (residual " << residual << ")";
      throw ConvergenceFailure(os.str(), residual, it);
    }
    s.v_f += options.step * d.dv_f;
    if (!spec.diabatic()) s.v_h += options.step * d.dv_h;
    s = with_derived_hidden(std::move(s), syn, spec);
  }
}

}  // namespace gsemm
