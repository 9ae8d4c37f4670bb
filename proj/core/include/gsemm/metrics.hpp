#pragma once

#include <vector>

#include "gsemm/types.hpp"

namespace gsemm {

struct Trajectory;

/// m_i = (1/N_f) sum_j xi_ji * g(V_f)_j, one entry per column of `patterns`.
/// g is the identity for LISEM and DSEM (raw feature currents) and sigma_f
/// for FullGSEMM.
Vector overlaps(const Vector& v_f, const Matrix& patterns, const ModelSpec& spec);

struct RetrievalCriterion {
  double overlap_threshold = 0.9;
  double min_dwell = 1.0;
  double max_time = 300.0;

  void validate() const;
};

struct Visit {
  Index memory = 0;
  double onset = 0.0;  // time the memory took the lead
  double peak = 0.0;   // largest overlap reached during the visit
};

/// Visits in order. At every snapshot the leading memory is the one with the
/// largest overlap among those at or above the threshold. A lead held for at
/// least min_dwell counts as a visit, unless the same memory was the previous
/// visit. Snapshots after max_time are ignored.
std::vector<Visit> extract_visits(const Trajectory& traj, const RetrievalCriterion& crit);

/// Memory indices of extract_visits.
std::vector<Index> extract_sequence(const Trajectory& traj, const RetrievalCriterion& crit);

/// Length of the longest run of consecutive entries of `sequence` that follows
/// the successor order of `cycle` (entries outside the cycle break a run).
std::size_t longest_cycle_run(const std::vector<Index>& sequence, const std::vector<Index>& cycle);

/// Number of complete passes through `cycle` in its longest in-order run.
std::size_t full_traversals(const std::vector<Index>& sequence, const std::vector<Index>& cycle);

/// Time between successive visit onsets.
std::vector<double> transition_intervals(const std::vector<Visit>& visits);

/// NaN for an empty list.
double median(std::vector<double> values);

}  // namespace gsemm
