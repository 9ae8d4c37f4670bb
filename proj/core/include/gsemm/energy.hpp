#pragma once

#include <cstdint>

#include "gsemm/activation.hpp"
#include "gsemm/dynamics.hpp"
#include "gsemm/types.hpp"

namespace gsemm {

/// Energy diagnostics at one state. The three-way split is only defined for
/// LISEM; the other variants leave e_assoc, e_seq and e_c as NaN.
struct EnergyReport {
  double total = 0.0;
  double e_assoc = 0.0;
  double e_seq = 0.0;
  double e_c = 0.0;
  double f_rate = 0.0;
  double g_rate = 0.0;
};

struct EnergyRates {
  double f_rate = 0.0;
  double g_rate = 0.0;
};

/// Master energy, evaluated at the V_h stored in `state`:
///
///   E = [V_f^T s_f - L_f] + [V_h^T s_h - L_h]
///       - sqrt(alpha_s) s_f^T Xi s_h - c V_d^T Xi Phi s_h
///
/// with s_f = grad L_f, s_h = grad L_h and c = delay_gain(spec).
double energy_gsemm(const NetworkState& state, const SynapseState& syn, const ModelSpec& spec,
                    const LagrangianPair& lag);

/// LISEM energy split into an associative part, a delay-driven sequence part
/// and a V_f-independent constant. Evaluated with the diabatic V_h, so it
/// agrees with energy_gsemm to rounding. f_rate / g_rate are left at zero.
EnergyReport energy_lisem(const NetworkState& state, const SynapseState& syn,
                          const ModelSpec& spec);

/// DSEM energy at the V_h stored in `state` (normally the derived drive).
double energy_dsem(const NetworkState& state, const SynapseState& syn, const ModelSpec& spec);

/// Total energy for any variant; diabatic variants use the derived V_h.
double model_energy(const NetworkState& state, const SynapseState& syn, const ModelSpec& spec);

/// Fast/slow split of dE/dt along the flow:
///   F = -[tau_f dV_f^T H(L_f) dV_f + tau_h dV_h^T H(L_h) dV_h]   (tau_h term only for FullGSEMM)
///   G = -c s_h^T Phi^T Xi^T dV_d
EnergyRates energy_rate_terms(const NetworkState& state, const StateDerivative& deriv,
                              const SynapseState& syn, const ModelSpec& spec,
                              const LagrangianPair& lag);

/// Everything above at once; the derivative is evaluated internally.
EnergyReport energy_report(const NetworkState& state, const SynapseState& syn,
                           const ModelSpec& spec);

struct FixedPointOptions {
  double step = 0.1;
  double tol = 1e-6;
  std::int64_t max_iters = 100000;
};

struct FixedPointResult {
  NetworkState state;
  std::int64_t iterations = 0;
  double residual = 0.0;
};

/// Relaxes the fast subsystem on the energy surface defined by a frozen
/// delay signal: V_f <- V_f + step * dV_f/dt (and V_h likewise for
/// FullGSEMM) until the sup-norm of the fast derivative drops below tol.
/// Throws ConvergenceFailure after max_iters.
FixedPointResult find_instantaneous_fixed_point(const NetworkState& start,
                                                const SynapseState& syn, const ModelSpec& spec,
                                                const Vector& frozen_v_d,
                                                const FixedPointOptions& options = {});

}  // namespace gsemm
