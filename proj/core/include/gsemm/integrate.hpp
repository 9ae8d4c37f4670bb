#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "gsemm/dynamics.hpp"
#include "gsemm/energy.hpp"
#include "gsemm/types.hpp"

namespace gsemm {

using RhsFn = std::function<StateDerivative(const NetworkState&)>;

/// One classical RK4 step applied jointly to every integrated component.
///
/// Components whose derivative is empty (v_h in diabatic variants) are carried
/// over unchanged; callers recompute derived quantities afterwards. Throws
/// NumericalBlowup if any stage produces a non-finite value, reporting `t`.
NetworkState rk4_step(const RhsFn& rhs, const NetworkState& state, double dt, double t = 0.0);

struct Trajectory {
  std::vector<double> times;
  std::vector<NetworkState> states;
  std::vector<Vector> overlaps;
  std::vector<EnergyReport> energies;  // empty unless requested

  std::size_t size() const noexcept { return times.size(); }
};

struct SimulationOptions {
  double duration = 300.0;
  double dt = 0.01;
  std::int64_t record_every = 10;
  bool record_energy = false;
  /// Hold V_d at its initial value (the fast subsystem on a frozen surface).
  bool freeze_delay = false;
  /// Patterns the overlaps are measured against; defaults to the columns of xi.
  std::optional<Matrix> overlap_patterns;
  /// Checked after each snapshot; returning true ends the run early.
  std::function<bool(const Trajectory&)> stop_when;
};

/// Fixed-step RK4 run that records a snapshot at t = 0, every
/// `record_every` steps, and at the final step. Diabatic variants store the
/// derived V_h in every snapshot.
Trajectory simulate(const ModelSpec& spec, const SynapseState& syn, const NetworkState& init,
                    const SimulationOptions& options);

/// How the delay line starts when a cue is applied.
///   Rest:    V_d = 0, no activity before the cue.
///   Matched: V_d = sigma_f(V_f), as if the cue had been held for a long time.
enum class DelayInit { Rest, Matched };

DelayInit parse_delay_init(std::string_view name);

/// Cue state: `memory` with floor(noise_fraction * n_f) distinct entries
/// sign-flipped, V_d per `delay_init`, V_h diabatic (zero for FullGSEMM).
NetworkState init_from_cue(const Vector& memory, double noise_fraction, std::uint64_t seed,
                           const ModelSpec& spec, const SynapseState& syn,
                           DelayInit delay_init = DelayInit::Rest);

}  // namespace gsemm
