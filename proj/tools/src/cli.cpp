#include "gsemm_cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <ostream>

#include <gsemm/config.hpp>
#include <gsemm/io.hpp>

#include "commands.hpp"

namespace gsemm::cli {

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential episodic memory simulations"};
  app.name(argv.empty() ? "gsemm" : fs::path(argv.front()).filename().string());
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "integrate a configured network, write the trajectory CSV");
  simulate->add_option("--config", sim.config, "INI config")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", sim.out, "trajectory CSV")->required();
  simulate->add_option("--seed", sim.seed, "override [memories] seed");

  EnergyTraceArgs et;
  auto* energy = app.add_subcommand("energy-trace", "trajectory with energy terms and fixed-point tracking");
  energy->add_option("--config", et.config, "INI config")->required()->check(CLI::ExistingFile);
  energy->add_option("--out", et.out, "trajectory CSV with energy columns")->required();
  energy->add_option("--fixed-points-out", et.fixed_points_out, "fixed-point CSV (default: <out stem>_fixed_points.csv)");
  energy->add_option("--seed", et.seed, "override [memories] seed");

  FixedPointsArgs fp;
  auto* fixed = app.add_subcommand("fixed-points", "instantaneous fixed points with V_d frozen along a trajectory");
  fixed->add_option("--config", fp.config, "INI config")->required()->check(CLI::ExistingFile);
  fixed->add_option("--out", fp.out, "fixed-point CSV")->required();
  fixed->add_option("--seed", fp.seed, "override [memories] seed");

  CapacityArgs cap;
  auto* capacity = app.add_subcommand("capacity", "minimum feature count per episode length");
  capacity->add_option("--config", cap.config, "INI config ([capacity], [retrieval])")->check(CLI::ExistingFile);
  capacity->add_option("--variant", cap.variant, "lisem or dsem");
  capacity->add_option("--k", cap.k, "episode length or range A..B");
  capacity->add_option("--trials", cap.trials, "trials per episode length")->check(CLI::PositiveNumber);
  capacity->add_option("--seed", cap.seed, "master seed");
  capacity->add_option("--workers", cap.workers, "worker threads (0: all cores)");
  capacity->add_option("--max-time", cap.max_time, "retrieval horizon per run")->check(CLI::PositiveNumber);
  capacity->add_option("--out", cap.out, "JSON summary")->capture_default_str();
  capacity->add_option("--table", cap.table, "CSV table (default: <out stem>.csv)");

  LearnArgs ln;
  auto* learn = app.add_subcommand("learn", "online training on a cyclic episode");
  learn->add_option("--config", ln.config, "INI config")->required()->check(CLI::ExistingFile);
  learn->add_option("--out", ln.out, "trained synapses (matrix text)")->required();
  learn->add_option("--snapshots", ln.snapshots, "directory for per-epoch snapshots")->required();
  learn->add_option("--seed", ln.seed, "override [learning] seed");

  try {
    std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : ConfigFailure;
  }

  try {
    if (*simulate) run_simulate(sim, out);
    else if (*energy) run_energy_trace(et, out);
    else if (*fixed) run_fixed_points(fp, out);
    else if (*capacity) run_capacity(cap, out);
    else if (*learn) run_learn(ln, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return ConfigFailure;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return ConfigFailure;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return ConfigFailure;
  } catch (const NumericalBlowup& e) {
    err << "numerical failure: " << e.what() << '\n';
    return NumericalFailure;
  } catch (const ConvergenceFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return NumericalFailure;
  } catch (const TrainingFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return NumericalFailure;
  }
  return Ok;
}

}  // namespace gsemm::cli
