#include "gsemm/integrate.hpp"

#include <cmath>
#include <sstream>

#include "gsemm/activation.hpp"
#include "gsemm/metrics.hpp"
#include "gsemm/random.hpp"
#include "fp_env.hpp"

namespace gsemm {

namespace {

// y + scale * d, skipping components the derivative does not carry.
NetworkState advance(const NetworkState& y, const StateDerivative& d, double scale) {
  NetworkState out = y;
  if (d.dv_f.size()) out.v_f += scale * d.dv_f;
  if (d.dv_h.size()) out.v_h += scale * d.dv_h;
  if (d.dv_d.size()) out.v_d += scale * d.dv_d;
  return out;
}

void check_finite(const StateDerivative& d, double t) {
  if (!d.dv_f.allFinite() || !d.dv_h.allFinite() || !d.dv_d.allFinite()) {
    std::ostringstream os;
    os << "non-finite derivative at t = " << t;
    throw NumericalBlowup(os.str(), t);
  }
}

}  // namespace

NetworkState rk4_step(const RhsFn& rhs, const NetworkState& y, double dt, double t) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");

  const StateDerivative k1 = rhs(y);
  check_finite(k1, t);
  const StateDerivative k2 = rhs(advance(y, k1, 0.5 * dt));
  check_finite(k2, t);
  const StateDerivative k3 = rhs(advance(y, k2, 0.5 * dt));
  check_finite(k3, t);
  const StateDerivative k4 = rhs(advance(y, k3, dt));
  check_finite(k4, t);

  NetworkState out = y;
  const double w = dt / 6.0;
  if (k1.dv_f.size()) out.v_f += w * (k1.dv_f + 2.0 * k2.dv_f + 2.0 * k3.dv_f + k4.dv_f);
  if (k1.dv_h.size()) out.v_h += w * (k1.dv_h + 2.0 * k2.dv_h + 2.0 * k3.dv_h + k4.dv_h);
  if (k1.dv_d.size()) out.v_d += w * (k1.dv_d + 2.0 * k2.dv_d + 2.0 * k3.dv_d + k4.dv_d);
  if (!out.all_finite()) {
    std::ostringstream os;
    os << "non-finite state after step at t = " << t;
    throw NumericalBlowup(os.str(), t);
  }
  return out;
}

Trajectory simulate(const ModelSpec& spec, const SynapseState& syn, const NetworkState& init,
                    const SimulationOptions& options) {
  spec.validate();
  if (!(options.duration > 0.0)) throw InvalidArgument("duration must be positive");
  if (!(options.dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (options.record_every < 1) throw InvalidArgument("record_every must be >= 1");

  detail::FlushDenormals ftz;
  NetworkState state = with_derived_hidden(init, syn, spec);
  check_shapes(state, syn, spec);

  const Matrix& patterns = options.overlap_patterns ? *options.overlap_patterns : syn.xi;
  if (patterns.rows() != spec.n_f) throw InvalidArgument("overlap patterns must have n_f rows");

  const RhsFn rhs = [&](const NetworkState& s) {
    StateDerivative d = model_rhs(spec.diabatic() ? with_derived_hidden(s, syn, spec) : s, syn, spec);
    if (options.freeze_delay) d.dv_d.setZero();
    return d;
  };

  const auto steps = static_cast<std::int64_t>(std::llround(options.duration / options.dt));
  Trajectory traj;
  const auto expected = static_cast<std::size_t>(steps / options.record_every + 2);
  traj.times.reserve(expected);
  traj.states.reserve(expected);
  traj.overlaps.reserve(expected);

  auto record = [&](std::int64_t step) {
    traj.times.push_back(static_cast<double>(step) * options.dt);
    traj.overlaps.push_back(overlaps(state.v_f, patterns, spec));
    if (options.record_energy) traj.energies.push_back(energy_report(state, syn, spec));
    traj.states.push_back(state);
    return options.stop_when && options.stop_when(traj);
  };

  if (record(0)) return traj;
  for (std::int64_t step = 1; step <= steps; ++step) {
    state = rk4_step(rhs, state, options.dt, static_cast<double>(step - 1) * options.dt);
    if (spec.diabatic()) state = with_derived_hidden(std::move(state), syn, spec);
    if (step % options.record_every == 0 || step == steps) {
      if (record(step)) break;
    }
  }
  return traj;
}

DelayInit parse_delay_init(std::string_view name) {
  if (name == "rest") return DelayInit::Rest;
  if (name == "matched") return DelayInit::Matched;
  throw InvalidArgument("unknown delay_init '" + std::string(name) + "'");
}

NetworkState init_from_cue(const Vector& memory, double noise_fraction, std::uint64_t seed,
                           const ModelSpec& spec, const SynapseState& syn, DelayInit delay_init) {
  if (!(noise_fraction >= 0.0) || !(noise_fraction < 0.5))
    throw InvalidArgument("noise_fraction must lie in [0, 0.5)");
  if (memory.size() != spec.n_f) throw InvalidArgument("cue length must equal n_f");

  NetworkState s;
  s.v_f = memory;
  const auto n = static_cast<std::uint64_t>(memory.size());
  const auto flips = static_cast<std::uint64_t>(std::floor(noise_fraction * static_cast<double>(n)));
  if (flips > 0) {
    // Partial Fisher-Yates: the first `flips` slots are a uniform subset.
    std::vector<Index> order(n);
    for (std::uint64_t i = 0; i < n; ++i) order[i] = static_cast<Index>(i);
    Rng rng(seed);
    for (std::uint64_t i = 0; i < flips; ++i) {
      const std::uint64_t j = i + rng.below(n - i);
      std::swap(order[i], order[j]);
      s.v_f[order[i]] = -s.v_f[order[i]];
    }
  }
  s.v_d = delay_init == DelayInit::Matched
              ? activate(spec.feature_activation(), s.v_f, spec.gamma)
              : Vector::Zero(spec.n_f);
  if (spec.diabatic()) {
    s.v_h = hidden_drive(s.v_f, s.v_d, syn, spec);
  } else {
    s.v_h = Vector::Zero(spec.n_h);
  }
  return s;
}

}  // namespace gsemm
