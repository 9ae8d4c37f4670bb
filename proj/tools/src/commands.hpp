#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <gsemm/types.hpp>

namespace gsemm::cli {

namespace fs = std::filesystem;

struct SimulateArgs {
  fs::path config;
  fs::path out;
  std::optional<std::uint64_t> seed;
};

struct EnergyTraceArgs {
  fs::path config;
  fs::path out;
  fs::path fixed_points_out;  // empty: derived from `out`
  std::optional<std::uint64_t> seed;
};

struct FixedPointsArgs {
  fs::path config;
  fs::path out;
  std::optional<std::uint64_t> seed;
};

struct CapacityArgs {
  std::optional<fs::path> config;
  std::optional<std::string> variant;
  std::optional<std::string> k;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<double> max_time;
  fs::path out = "capacity.json";
  fs::path table;  // empty: derived from `out`
};

struct LearnArgs {
  fs::path config;
  fs::path out;
  fs::path snapshots;
  std::optional<std::uint64_t> seed;
};

void run_simulate(const SimulateArgs& args, std::ostream& out);
void run_energy_trace(const EnergyTraceArgs& args, std::ostream& out);
void run_fixed_points(const FixedPointsArgs& args, std::ostream& out);
void run_capacity(const CapacityArgs& args, std::ostream& out);
void run_learn(const LearnArgs& args, std::ostream& out);

}  // namespace gsemm::cli
