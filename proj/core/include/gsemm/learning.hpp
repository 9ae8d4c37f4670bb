#pragma once

#include <cstdint>
#include <vector>

#include "gsemm/types.hpp"

namespace gsemm {

struct LearningConfig {
  double tau_l_xi = 6.2e5;
  double tau_l_phi = 6.2e7;
  double beta_c = 0.621;
  std::int64_t steps_per_memory = 4500;
  int epochs = 100;
  double init_range = 1.0;
  /// Integration step of the driven delay line.
  double dt = 0.01;
  /// Learning-clock time credited to each integration step; the increment
  /// applied per step is learning_dt * (rule / tau_L).
  double learning_dt = 1.0;
  /// Epochs at which full synapse copies are kept (0 = before training).
  std::vector<int> snapshot_epochs = {0, 10, 70, 100};
  /// Energy samples per presentation in the snapshot energy traces.
  std::int64_t energy_samples_per_memory = 10;

  void validate() const;
};

/// Feature/hidden signal pair used on either side of the learning rule.
struct Signals {
  Vector v_f;
  Vector v_h;
};

/// Rate of change of Xi (already divided by tau_l_xi):
///   tau dXi/dt = sqrt(a_s) [f_t s(h_t)^T - b f_c s(h_c)^T]
///              + a_c V_d (s(h_t)^T - b s(h_c)^T) Phi^T
Matrix xi_update(const Signals& current, const Signals& target, const Vector& v_d,
                 const SynapseState& syn, const ModelSpec& spec, const LearningConfig& cfg);

/// Rate of change of Phi (already divided by tau_l_phi):
///   tau dPhi/dt = a_c Xi^T (V_d s(h_t)^T - b V_d s(h_c)^T)
Matrix phi_update(const Signals& current, const Signals& target, const Vector& v_d,
                  const SynapseState& syn, const ModelSpec& spec, const LearningConfig& cfg);

/// Target side: V_f = next memory, V_h = diabatic drive at the current delay.
Signals target_signals(const Vector& next_memory, const NetworkState& state,
                       const SynapseState& syn, const ModelSpec& spec);

/// Current side: the running V_f and its diabatic drive.
Signals current_signals(const NetworkState& state, const SynapseState& syn,
                        const ModelSpec& spec);

struct TrainingSnapshot {
  int epoch = 0;
  Matrix xi;
  Matrix phi;
  std::vector<double> energy_trace;
};

struct EpochMetrics {
  int epoch = 0;
  /// Mean over presentations (sampled at the end of each) of
  /// E(target state) - E(current driven state).
  double target_energy_gap = 0.0;
};

struct TrainingResult {
  SynapseState syn;
  std::vector<TrainingSnapshot> snapshots;
  std::vector<EpochMetrics> metrics;  // one per epoch, including epoch 0
};

/// Online training on a cyclic episode (columns of `episode`, in order).
/// Each memory is clamped onto V_f for steps_per_memory RK4 steps while V_d
/// evolves freely; after every step both synapse matrices move along the
/// learning rule with the next memory in the cycle as the target.
/// Throws TrainingFailure on non-finite synapses or states.
TrainingResult train_online(const Matrix& episode, const ModelSpec& spec,
                            const LearningConfig& cfg, std::uint64_t seed);

/// How well the trained synapses encode an episode.
struct ConsolidationReport {
  std::vector<Index> columns;    // best-aligned xi column per memory
  std::vector<double> alignment; // its normalized inner product
  bool distinct = false;         // no column claimed twice
  std::vector<Index> successor;  // row-wise argmax of phi restricted to `columns`
  bool successor_map_ok = false; // successor[n] == n + 1 (mod K)
};

ConsolidationReport analyze_consolidation(const SynapseState& syn, const Matrix& episode);

}  // namespace gsemm
