#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gsemm/integrate.hpp"
#include "gsemm/metrics.hpp"
#include "gsemm/types.hpp"

namespace gsemm {

/// {10, 20, ..., 100, 125, 150, ..., 500}
std::vector<Index> default_nf_grid();

struct CapacityOptions {
  std::vector<Index> n_f_grid = default_nf_grid();
  /// Spacing of the final scan between the last failing and first passing
  /// grid values; 0 disables refinement.
  Index refine_step = 5;
  double noise_fraction = 0.0;
  DelayInit delay_init = DelayInit::Rest;
  double dt = 0.01;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
  /// Applied to ModelSpec::lisem / ModelSpec::dsem before each run.
  std::optional<double> alpha_c;

  void validate() const;
};

struct CapacityTrial {
  std::optional<Index> min_n_f;  // empty when every grid value failed
  bool linear_fallback = false;  // monotonicity spot check failed
  int simulations = 0;
};

struct CapacityResult {
  Variant variant = Variant::DSEM;
  Index k = 0;
  int trials = 0;
  std::vector<CapacityTrial> per_trial;
  /// Trials whose minimum is at or below each grid value.
  std::map<Index, int> successes;
  double mean_min_n_f = 0.0;  // over non-saturated trials; NaN if none
  double std_min_n_f = 0.0;   // population standard deviation
  int saturated_count = 0;
};

/// Single retrieval test: k fresh memories of length n_f as one k-cycle,
/// cued at the first memory; passes when the extracted sequence contains all
/// k memories consecutively in cycle order within crit.max_time.
bool cycle_retrieved(Variant variant, Index k, Index n_f, const RetrievalCriterion& crit,
                     const CapacityOptions& opts, std::uint64_t seed);

/// Smallest n_f that passes, per trial, over a monotone-assumed grid.
/// Deterministic for a fixed seed whatever the worker count.
CapacityResult capacity_search(Variant variant, Index k, int trials, const RetrievalCriterion& crit,
                               const CapacityOptions& opts, std::uint64_t seed);

}  // namespace gsemm
