#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gsemm/capacity.hpp"
#include "gsemm/energy.hpp"
#include "gsemm/integrate.hpp"
#include "gsemm/learning.hpp"
#include "gsemm/metrics.hpp"
#include "gsemm/types.hpp"

namespace gsemm {

/// Raised for unreadable files, unknown keys and malformed values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MemoryConfig {
  std::uint64_t seed = 1;
  Index count = 7;
  /// Zero-based here; the file format counts from 1.
  std::vector<std::vector<Index>> cycles = {{0, 1, 2}, {3, 4, 5, 6}};
};

struct RunConfig {
  double duration = 300.0;
  double dt = 0.01;
  std::int64_t record_every = 10;
  Index cue = 0;  // zero-based memory index
  double noise = 0.0;
  std::uint64_t cue_seed = 0;
  DelayInit delay_init = DelayInit::Rest;
  bool record_energy = true;
};

struct FixedPointConfig {
  FixedPointOptions options;
  /// Track the instantaneous fixed point at every `every`-th snapshot.
  std::int64_t every = 10;
};

struct LearningTask {
  Index memories = 4;
  std::uint64_t seed = 1;
  LearningConfig config;
};

struct CapacityConfig {
  Variant variant = Variant::DSEM;
  Index k_min = 3;
  Index k_max = 10;
  int trials = 100;
  std::uint64_t seed = 7;
  /// Retrieval horizon for each capacity run; threshold and dwell come from
  /// [retrieval].
  double max_time = 300.0;
  CapacityOptions options;
};

struct ExperimentConfig {
  ModelSpec model;
  bool n_h_explicit = false;
  MemoryConfig memories;
  RunConfig simulation;
  RetrievalCriterion retrieval;
  FixedPointConfig fixed_points;
  LearningTask learning;
  CapacityConfig capacity;
};

/// Parses INI text: [model], [memories], [simulation], [retrieval],
/// [fixed_points], [learning], [capacity]. Every key is optional; unknown
/// sections or keys are errors. Model defaults follow the chosen variant.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// "3..10" or "5".
std::pair<Index, Index> parse_k_range(const std::string& text);

}  // namespace gsemm
