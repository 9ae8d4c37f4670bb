#include "gsemm/metrics.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "gsemm/activation.hpp"
#include "gsemm/integrate.hpp"

namespace gsemm {

Vector overlaps(const Vector& v_f, const Matrix& patterns, const ModelSpec& spec) {
  if (v_f.size() != patterns.rows()) throw InvalidArgument("overlap shape mismatch");
  const auto n = static_cast<double>(v_f.size());
  if (spec.variant == Variant::FullGSEMM)
    return patterns.transpose() * activate(spec.feature_activation(), v_f, spec.gamma) / n;
  return patterns.transpose() * v_f / n;
}

void RetrievalCriterion::validate() const {
  if (!(overlap_threshold > 0.0) || overlap_threshold > 1.0)
    throw InvalidArgument("overlap_threshold must lie in (0, 1]");
  if (!(min_dwell > 0.0)) throw InvalidArgument("min_dwell must be positive");
  if (!(max_time > 0.0)) throw InvalidArgument("max_time must be positive");
}

std::vector<Visit> extract_visits(const Trajectory& traj, const RetrievalCriterion& crit) {
  std::vector<Visit> visits;
  Index leader = -1;
  double lead_start = 0.0;
  double lead_peak = 0.0;
  bool counted = false;

  for (std::size_t s = 0; s < traj.size() && s < traj.overlaps.size(); ++s) {
    const double t = traj.times[s];
    if (t > crit.max_time + 1e-9) break;
    const Vector& m = traj.overlaps[s];

    Index best = -1;
    for (Index i = 0; i < m.size(); ++i)
      if (m[i] >= crit.overlap_threshold && (best < 0 || m[i] > m[best])) best = i;

    if (best != leader) {
      leader = best;
      lead_start = t;
      lead_peak = best >= 0 ? m[best] : 0.0;
      counted = false;
    } else if (best >= 0) {
      lead_peak = std::max(lead_peak, m[best]);
      if (counted) visits.back().peak = std::max(visits.back().peak, m[best]);
    }

    if (leader >= 0 && !counted && t - lead_start >= crit.min_dwell - 1e-9) {
      counted = true;
      if (visits.empty() || visits.back().memory != leader) {
        visits.push_back({leader, lead_start, lead_peak});
      } else {
        visits.back().peak = std::max(visits.back().peak, lead_peak);
      }
    }
  }
  return visits;
}

std::vector<Index> extract_sequence(const Trajectory& traj, const RetrievalCriterion& crit) {
  std::vector<Index> out;
  for (const Visit& v : extract_visits(traj, crit)) out.push_back(v.memory);
  return out;
}

std::size_t longest_cycle_run(const std::vector<Index>& sequence,
                              const std::vector<Index>& cycle) {
  if (cycle.empty()) return 0;
  std::unordered_map<Index, Index> successor;
  for (std::size_t i = 0; i < cycle.size(); ++i)
    successor[cycle[i]] = cycle[(i + 1) % cycle.size()];

  std::size_t best = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (!successor.contains(sequence[i])) {
      run = 0;
      continue;
    }
    if (run > 0 && successor.at(sequence[i - 1]) == sequence[i]) {
      ++run;
    } else {
      run = 1;
    }
    best = std::max(best, run);
  }
  return best;
}

std::size_t full_traversals(const std::vector<Index>& sequence, const std::vector<Index>& cycle) {
  if (cycle.empty()) return 0;
  return longest_cycle_run(sequence, cycle) / cycle.size();
}

std::vector<double> transition_intervals(const std::vector<Visit>& visits) {
  std::vector<double> out;
  for (std::size_t i = 1; i < visits.size(); ++i) out.push_back(visits[i].onset - visits[i - 1].onset);
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace gsemm
