#include "gsemm/learning.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gsemm/activation.hpp"
#include "gsemm/dynamics.hpp"
#include "gsemm/energy.hpp"
#include "gsemm/random.hpp"
#include "fp_env.hpp"

namespace gsemm {

namespace {

void check_signals(const Signals& s, const ModelSpec& spec, const char* which) {
  if (s.v_f.size() != spec.n_f || s.v_h.size() != spec.n_h) {
    std::ostringstream os;
    os << which << " signals have the wrong shape";
    throw InvalidArgument(os.str());
  }
}

double state_energy(const Signals& s, const Vector& v_d, const SynapseState& syn,
                    const ModelSpec& spec) {
  return energy_dsem(NetworkState{s.v_f, s.v_h, v_d}, syn, spec);
}


}  // namespace

void LearningConfig::validate() const {
  if (!(tau_l_xi > 0.0) || !(tau_l_phi > 0.0))
    throw InvalidArgument("learning timescales must be positive");
  if (!(beta_c > 0.0) || beta_c > 1.0) throw InvalidArgument("beta_c must lie in (0, 1]");
  if (steps_per_memory < 1) throw InvalidArgument("steps_per_memory must be >= 1");
  if (epochs < 0) throw InvalidArgument("epochs must be >= 0");
  if (!(init_range >= 0.0)) throw InvalidArgument("init_range must be non-negative");
  if (!(dt > 0.0) || !(learning_dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (energy_samples_per_memory < 0) throw InvalidArgument("negative energy sample count");
}

Matrix xi_update(const Signals& current, const Signals& target, const Vector& v_d,
                 const SynapseState& syn, const ModelSpec& spec, const LearningConfig& cfg) {
  syn.validate(spec);
  check_signals(current, spec, "current");
  check_signals(target, spec, "target");
  if (v_d.size() != spec.n_f) throw InvalidArgument("v_d has the wrong length");

  const Activation act = spec.hidden_activation();
  const Vector s_t = activate(act, target.v_h, spec.gamma);
  const Vector s_c = activate(act, current.v_h, spec.gamma);
  const double b = cfg.beta_c;

  Matrix rate = std::sqrt(spec.alpha_s) *
                (target.v_f * s_t.transpose() - b * current.v_f * s_c.transpose());
  const Vector phi_ds = syn.phi * (s_t - b * s_c);
  rate.noalias() += spec.alpha_c * v_d * phi_ds.transpose();
  return rate / cfg.tau_l_xi;
}

Matrix phi_update(const Signals& current, const Signals& target, const Vector& v_d,
                  const SynapseState& syn, const ModelSpec& spec, const LearningConfig& cfg) {
  syn.validate(spec);
  check_signals(current, spec, "current");
  check_signals(target, spec, "target");
  if (v_d.size() != spec.n_f) throw InvalidArgument("v_d has the wrong length");

  const Activation act = spec.hidden_activation();
  const Vector ds = activate(act, target.v_h, spec.gamma) -
                    cfg.beta_c * activate(act, current.v_h, spec.gamma);
  const Vector xi_vd = syn.xi.transpose() * v_d;
  return spec.alpha_c * xi_vd * ds.transpose() / cfg.tau_l_phi;
}

Signals target_signals(const Vector& next_memory, const NetworkState& state,
                       const SynapseState& syn, const ModelSpec& spec) {
  if (next_memory.size() != spec.n_f) throw InvalidArgument("memory length must equal n_f");
  return {next_memory, hidden_drive(next_memory, state.v_d, syn, spec)};
}

Signals current_signals(const NetworkState& state, const SynapseState& syn,
                        const ModelSpec& spec) {
  return {state.v_f, hidden_drive(state.v_f, state.v_d, syn, spec)};
}

TrainingResult train_online(const Matrix& episode, const ModelSpec& spec,
                            const LearningConfig& cfg, std::uint64_t seed) {
  spec.validate();
  cfg.validate();
  if (spec.variant != Variant::DSEM) throw InvalidArgument("online learning is defined for DSEM");
  if (episode.cols() < 1) throw InvalidArgument("episode must contain at least one memory");
  if (episode.rows() != spec.n_f) throw InvalidArgument("memories must have length n_f");

  detail::FlushDenormals ftz;
  Rng rng(seed);
  TrainingResult result;
  SynapseState& syn = result.syn;
  syn.xi.resize(spec.n_f, spec.n_h);
  syn.phi.resize(spec.n_h, spec.n_h);
  for (Index j = 0; j < spec.n_h; ++j)
    for (Index i = 0; i < spec.n_f; ++i) syn.xi(i, j) = rng.uniform(-cfg.init_range, cfg.init_range);
  for (Index j = 0; j < spec.n_h; ++j)
    for (Index i = 0; i < spec.n_h; ++i)
      syn.phi(i, j) = rng.uniform(-cfg.init_range, cfg.init_range);

  const Index k = episode.cols();
  // With V_f clamped the delay ODE is linear, so one RK4 step is a fixed
  // polynomial contraction toward the stimulus.
  const double h = cfg.dt / spec.tau_d;
  const double decay = 1.0 - h + h * h / 2.0 - h * h * h / 6.0 + h * h * h * h / 24.0;
  const std::int64_t sample_every =
      cfg.energy_samples_per_memory > 0
          ? std::max<std::int64_t>(1, cfg.steps_per_memory / cfg.energy_samples_per_memory)
          : 0;
  auto wants_snapshot = [&](int epoch) {
    return std::find(cfg.snapshot_epochs.begin(), cfg.snapshot_epochs.end(), epoch) !=
           cfg.snapshot_epochs.end();
  };

  NetworkState state{episode.col(0), Vector::Zero(spec.n_h), Vector::Zero(spec.n_f)};

  // Epoch 0 is a pass over the episode with learning switched off, so the
  // snapshot and metrics describe the untrained network on the same drive.
  for (int epoch = 0; epoch <= cfg.epochs; ++epoch) {
    const bool learn = epoch > 0;
    std::vector<double> trace;
    double gap_sum = 0.0;

    for (Index n = 0; n < k; ++n) {
      const Vector& memory = episode.col(n);
      const Vector& next = episode.col((n + 1) % k);
      state.v_f = memory;

      for (std::int64_t step = 1; step <= cfg.steps_per_memory; ++step) {
        state.v_d = memory + decay * (state.v_d - memory);

        const Signals cur = current_signals(state, syn, spec);
        const Signals tgt = target_signals(next, state, syn, spec);

        if (sample_every > 0 && step % sample_every == 0)
          trace.push_back(state_energy(cur, state.v_d, syn, spec));
        if (step == cfg.steps_per_memory)
          gap_sum += state_energy(tgt, state.v_d, syn, spec) - state_energy(cur, state.v_d, syn, spec);

        if (learn) {
          const Matrix d_xi = xi_update(cur, tgt, state.v_d, syn, spec, cfg);
          const Matrix d_phi = phi_update(cur, tgt, state.v_d, syn, spec, cfg);
          syn.xi.noalias() += cfg.learning_dt * d_xi;
          syn.phi.noalias() += cfg.learning_dt * d_phi;
        }
      }
      if (!syn.xi.allFinite() || !syn.phi.allFinite() || !state.v_d.allFinite())
        throw TrainingFailure("synapses became non-finite during epoch " + std::to_string(epoch),
                              epoch);
    }

    result.metrics.push_back({epoch, gap_sum / static_cast<double>(k)});
    if (wants_snapshot(epoch))
      result.snapshots.push_back({epoch, syn.xi, syn.phi, std::move(trace)});
  }
  return result;
}

ConsolidationReport analyze_consolidation(const SynapseState& syn, const Matrix& episode) {
  if (episode.rows() != syn.xi.rows()) throw InvalidArgument("episode/xi row mismatch");
  ConsolidationReport r;
  const Index k = episode.cols();
  const Vector col_norms = syn.xi.colwise().norm().transpose();

  for (Index n = 0; n < k; ++n) {
    const Vector m = episode.col(n);
    const Vector dots = syn.xi.transpose() * m;
    Index best = 0;
    double best_score = -2.0;
    for (Index j = 0; j < syn.xi.cols(); ++j) {
      const double denom = m.norm() * col_norms[j];
      const double score = denom > 0.0 ? dots[j] / denom : 0.0;
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    r.columns.push_back(best);
    r.alignment.push_back(best_score);
  }
  r.distinct = std::set<Index>(r.columns.begin(), r.columns.end()).size() == r.columns.size();

  r.successor_map_ok = r.distinct;
  for (Index n = 0; n < k; ++n) {
    Index best = 0;
    for (Index m = 1; m < k; ++m)
      if (syn.phi(r.columns[n], r.columns[m]) > syn.phi(r.columns[n], r.columns[best])) best = m;
    r.successor.push_back(best);
    if (best != (n + 1) % k) r.successor_map_ok = false;
  }
  return r;
}

}  // namespace gsemm
