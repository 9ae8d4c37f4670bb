#include "gsemm/capacity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "gsemm/model.hpp"
#include "gsemm/random.hpp"

namespace gsemm {

std::vector<Index> default_nf_grid() {
  std::vector<Index> grid;
  for (Index n = 10; n <= 100; n += 10) grid.push_back(n);
  for (Index n = 125; n <= 500; n += 25) grid.push_back(n);
  return grid;
}

void CapacityOptions::validate() const {
  if (n_f_grid.empty()) throw InvalidArgument("n_f grid is empty");
  if (n_f_grid.front() < 1) throw InvalidArgument("n_f grid values must be positive");
  if (!std::is_sorted(n_f_grid.begin(), n_f_grid.end()) ||
      std::adjacent_find(n_f_grid.begin(), n_f_grid.end()) != n_f_grid.end())
    throw InvalidArgument("n_f grid must be strictly increasing");
  if (n_f_grid.back() > 500) throw InvalidArgument("n_f grid is capped at 500");
  if (refine_step < 0) throw InvalidArgument("refine_step must be non-negative");
  if (!(noise_fraction >= 0.0) || noise_fraction >= 0.5)
    throw InvalidArgument("noise_fraction must lie in [0, 0.5)");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
}

bool cycle_retrieved(Variant variant, Index k, Index n_f, const RetrievalCriterion& crit,
                     const CapacityOptions& opts, std::uint64_t seed) {
  if (variant == Variant::FullGSEMM) throw InvalidArgument("capacity runs use LISEM or DSEM");
  ModelSpec spec = variant == Variant::LISEM ? ModelSpec::lisem(n_f, k) : ModelSpec::dsem(n_f, k);
  if (opts.alpha_c) spec.alpha_c = *opts.alpha_c;

  std::vector<Index> cycle(static_cast<std::size_t>(k));
  std::iota(cycle.begin(), cycle.end(), Index{0});

  const Matrix memories = generate_memories(n_f, k, derive_seed(seed, {1}));
  const SynapseState syn = preload(memories, build_episode_graph({cycle}), spec.alpha_s);
  const NetworkState init = init_from_cue(memories.col(0), opts.noise_fraction,
                                          derive_seed(seed, {2}), spec, syn, opts.delay_init);

  SimulationOptions sim;
  sim.duration = crit.max_time;
  sim.dt = opts.dt;
  sim.record_every = std::max<std::int64_t>(1, std::llround(0.1 / opts.dt));
  sim.stop_when = [&](const Trajectory& tr) {
    // Checking every snapshot would be quadratic; sample once per time unit.
    if (tr.size() % 10 != 0) return false;
    return longest_cycle_run(extract_sequence(tr, crit), cycle) >= cycle.size();
  };
  try {
    const Trajectory tr = simulate(spec, syn, init, sim);
    return longest_cycle_run(extract_sequence(tr, crit), cycle) >= cycle.size();
  } catch (const NumericalBlowup&) {
    return false;
  }
}

namespace {

CapacityTrial run_trial(Variant variant, Index k, const RetrievalCriterion& crit,
                        const CapacityOptions& opts, std::uint64_t trial_seed) {
  CapacityTrial trial;
  const auto& grid = opts.n_f_grid;
  std::map<Index, bool> seen;
  auto test = [&](Index n_f) {
    if (auto it = seen.find(n_f); it != seen.end()) return it->second;
    ++trial.simulations;
    const bool ok = cycle_retrieved(variant, k, n_f, crit, opts,
                                    derive_seed(trial_seed, {static_cast<std::uint64_t>(n_f)}));
    seen.emplace(n_f, ok);
    return ok;
  };

  const auto last = static_cast<std::ptrdiff_t>(grid.size()) - 1;
  if (!test(grid[static_cast<std::size_t>(last)])) return trial;

  std::ptrdiff_t lo = -1, hi = last;  // grid[hi] passes, grid[lo] fails (or lo = -1)
  while (hi - lo > 1) {
    const std::ptrdiff_t mid = lo + (hi - lo) / 2;
    (test(grid[static_cast<std::size_t>(mid)]) ? hi : lo) = mid;
  }

  // Spot check: halfway below the answer must fail as well. Any pass below
  // a recorded failure, or any failure above a recorded pass, means the
  // monotone assumption broke, so fall back to a full ascending scan.
  if (hi > 1) test(grid[static_cast<std::size_t>(hi / 2)]);
  bool monotone = true;
  bool passed_before = false;
  for (const auto& [n_f, ok] : seen) {
    if (passed_before && !ok) monotone = false;
    passed_before = passed_before || ok;
  }
  if (!monotone) {
    trial.linear_fallback = true;
    for (std::ptrdiff_t i = 0; i <= last; ++i)
      if (test(grid[static_cast<std::size_t>(i)])) {
        hi = i;
        break;
      }
  }

  Index answer = grid[static_cast<std::size_t>(hi)];
  if (opts.refine_step > 0) {
    const Index floor = hi > 0 ? grid[static_cast<std::size_t>(hi - 1)] : 0;
    for (Index n_f = floor + opts.refine_step; n_f < answer; n_f += opts.refine_step)
      if (test(n_f)) {
        answer = n_f;
        break;
      }
  }
  trial.min_n_f = answer;
  return trial;
}

}  // namespace

CapacityResult capacity_search(Variant variant, Index k, int trials, const RetrievalCriterion& crit,
                               const CapacityOptions& opts, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("episode length must be >= 2");
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (variant == Variant::FullGSEMM) throw InvalidArgument("capacity runs use LISEM or DSEM");
  crit.validate();
  opts.validate();

  CapacityResult result;
  result.variant = variant;
  result.k = k;
  result.trials = trials;
  result.per_trial.resize(static_cast<std::size_t>(trials));

  unsigned workers = opts.workers != 0 ? opts.workers : std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1u, static_cast<unsigned>(trials));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int t = next++; t < trials; t = next++) {
      try {
        const auto trial_seed = derive_seed(
            seed, {static_cast<std::uint64_t>(variant), static_cast<std::uint64_t>(k),
                   static_cast<std::uint64_t>(t)});
        result.per_trial[static_cast<std::size_t>(t)] = run_trial(variant, k, crit, opts, trial_seed);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> mins;
  for (const auto& trial : result.per_trial) {
    if (trial.min_n_f)
      mins.push_back(static_cast<double>(*trial.min_n_f));
    else
      ++result.saturated_count;
  }
  for (Index g : opts.n_f_grid) {
    int count = 0;
    for (const auto& trial : result.per_trial)
      if (trial.min_n_f && *trial.min_n_f <= g) ++count;
    result.successes[g] = count;
  }
  if (mins.empty()) {
    result.mean_min_n_f = std::nan("");
    result.std_min_n_f = std::nan("");
  } else {
    const double mean = std::accumulate(mins.begin(), mins.end(), 0.0) / static_cast<double>(mins.size());
    double ss = 0.0;
    for (double m : mins) ss += (m - mean) * (m - mean);
    result.mean_min_n_f = mean;
    result.std_min_n_f = std::sqrt(ss / static_cast<double>(mins.size()));
  }
  return result;
}

}  // namespace gsemm
