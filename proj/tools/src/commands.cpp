#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <json.hpp>
#include <ostream>

#include <gsemm/capacity.hpp>
#include <gsemm/config.hpp>
#include <gsemm/energy.hpp>
#include <gsemm/integrate.hpp>
#include <gsemm/io.hpp>
#include <gsemm/learning.hpp>
#include <gsemm/metrics.hpp>
#include <gsemm/model.hpp>
#include <gsemm/random.hpp>

namespace gsemm::cli {

namespace {

using nlohmann::json;

struct Network {
  ModelSpec spec;
  Matrix memories;
  SynapseState syn;
  NetworkState init;
};

Network build_network(const ExperimentConfig& cfg) {
  Network net;
  net.spec = cfg.model;
  const Index count = cfg.memories.count;
  if (cfg.n_h_explicit && net.spec.n_h != count)
    throw ConfigError("[model] n_h must equal [memories] count for preloaded networks");
  net.spec.n_h = count;
  net.memories = generate_memories(net.spec.n_f, count, cfg.memories.seed);
  net.syn = preload(net.memories, build_episode_graph(cfg.memories.cycles, count), net.spec.alpha_s);
  net.init = init_from_cue(net.memories.col(cfg.simulation.cue), cfg.simulation.noise,
                           cfg.simulation.cue_seed, net.spec, net.syn, cfg.simulation.delay_init);
  return net;
}

ExperimentConfig load_with_seed(const fs::path& path, std::optional<std::uint64_t> seed) {
  ExperimentConfig cfg = load_config(path);
  if (seed) cfg.memories.seed = *seed;
  return cfg;
}

Trajectory run_trajectory(const ExperimentConfig& cfg, const Network& net, bool energy) {
  SimulationOptions opts;
  opts.duration = cfg.simulation.duration;
  opts.dt = cfg.simulation.dt;
  opts.record_every = cfg.simulation.record_every;
  opts.record_energy = energy;
  opts.overlap_patterns = net.memories;
  return simulate(net.spec, net.syn, net.init, opts);
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_table(const fs::path& path, const CsvTable& table) {
  auto out = open_out(path);
  write_csv(out, table);
}

void report_sequence(std::ostream& out, const Trajectory& traj, const RetrievalCriterion& crit) {
  out << "retrieved sequence:";
  for (Index i : extract_sequence(traj, crit)) out << ' ' << i + 1;
  out << '\n';
}

Index argmax(const Vector& v) {
  Index best = 0;
  v.maxCoeff(&best);
  return best;
}

// One row per tracked snapshot: the fast subsystem relaxed with V_d frozen
// at its value in that snapshot.
CsvTable fixed_point_table(const Trajectory& traj, const Network& net, const FixedPointConfig& fp) {
  CsvTable t;
  const Index k = net.memories.cols();
  t.header = {"time", "converged", "iterations", "residual", "E_fixed", "E_state"};
  for (Index i = 1; i <= k; ++i) t.header.push_back("fp_m_" + std::to_string(i));
  t.header.push_back("fp_nearest");
  t.header.push_back("state_nearest");

  const double nan = std::nan("");
  for (std::size_t s = 0; s < traj.size(); s += static_cast<std::size_t>(fp.every)) {
    const NetworkState& state = traj.states[s];
    std::vector<double> row{traj.times[s]};
    try {
      const FixedPointResult r =
          find_instantaneous_fixed_point(state, net.syn, net.spec, state.v_d, fp.options);
      const Vector m = overlaps(r.state.v_f, net.memories, net.spec);
      row.insert(row.end(), {1.0, static_cast<double>(r.iterations), r.residual,
                             model_energy(r.state, net.syn, net.spec),
                             model_energy(state, net.syn, net.spec)});
      for (Index i = 0; i < k; ++i) row.push_back(m[i]);
      row.push_back(static_cast<double>(argmax(m) + 1));
    } catch (const ConvergenceFailure& e) {
      row.insert(row.end(), {0.0, static_cast<double>(e.iterations()), e.residual(), nan,
                             model_energy(state, net.syn, net.spec)});
      row.insert(row.end(), static_cast<std::size_t>(k) + 1, nan);
    }
    row.push_back(static_cast<double>(argmax(traj.overlaps[s]) + 1));
    t.rows.push_back(std::move(row));
  }
  return t;
}

json nan_to_null(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

}  // namespace

void run_simulate(const SimulateArgs& args, std::ostream& out) {
  const ExperimentConfig cfg = load_with_seed(args.config, args.seed);
  const Network net = build_network(cfg);
  const Trajectory traj = run_trajectory(cfg, net, cfg.simulation.record_energy);
  write_table(args.out, trajectory_table(traj));
  out << "wrote " << traj.size() << " snapshots to " << args.out.string() << '\n';
  report_sequence(out, traj, cfg.retrieval);
}

void run_energy_trace(const EnergyTraceArgs& args, std::ostream& out) {
  const ExperimentConfig cfg = load_with_seed(args.config, args.seed);
  const Network net = build_network(cfg);
  const Trajectory traj = run_trajectory(cfg, net, true);
  write_table(args.out, trajectory_table(traj));

  fs::path fp_path = args.fixed_points_out;
  if (fp_path.empty())
    fp_path = args.out.parent_path() / (args.out.stem().string() + "_fixed_points.csv");
  const CsvTable fixed = fixed_point_table(traj, net, cfg.fixed_points);
  write_table(fp_path, fixed);

  double worst_f = -std::numeric_limits<double>::infinity();
  for (const auto& e : traj.energies) worst_f = std::max(worst_f, e.f_rate);
  out << "wrote " << traj.size() << " snapshots to " << args.out.string() << " and "
      << fixed.rows.size() << " fixed points to " << fp_path.string() << '\n';
  out << "max F over the run: " << format_double(worst_f) << '\n';
  report_sequence(out, traj, cfg.retrieval);
}

void run_fixed_points(const FixedPointsArgs& args, std::ostream& out) {
  const ExperimentConfig cfg = load_with_seed(args.config, args.seed);
  const Network net = build_network(cfg);
  const Trajectory traj = run_trajectory(cfg, net, false);
  const CsvTable fixed = fixed_point_table(traj, net, cfg.fixed_points);
  write_table(args.out, fixed);
  std::size_t converged = 0;
  for (const auto& row : fixed.rows) converged += row[1] > 0.5;
  out << "tracked " << fixed.rows.size() << " snapshots, " << converged << " converged\n";
}

void run_capacity(const CapacityArgs& args, std::ostream& out) {
  ExperimentConfig cfg = args.config ? load_config(*args.config) : parse_config("");
  CapacityConfig& cc = cfg.capacity;
  if (args.variant) cc.variant = parse_variant(*args.variant);
  if (args.k) std::tie(cc.k_min, cc.k_max) = parse_k_range(*args.k);
  if (args.trials) cc.trials = *args.trials;
  if (args.seed) cc.seed = *args.seed;
  if (args.workers) cc.options.workers = *args.workers;
  if (args.max_time) cc.max_time = *args.max_time;
  if (cc.variant == Variant::FullGSEMM) throw ConfigError("capacity runs use lisem or dsem");

  RetrievalCriterion crit = cfg.retrieval;
  crit.max_time = cc.max_time;

  json results = json::array();
  CsvTable table;
  table.header = {"k", "trials", "mean_min_nf", "std_min_nf", "saturated_count"};
  for (Index k = cc.k_min; k <= cc.k_max; ++k) {
    const CapacityResult r = capacity_search(cc.variant, k, cc.trials, crit, cc.options, cc.seed);
    json per_trial = json::array();
    for (const auto& t : r.per_trial)
      per_trial.push_back(t.min_n_f ? json(*t.min_n_f) : json(nullptr));
    results.push_back({{"variant", std::string(to_string(r.variant))},
                       {"k", r.k},
                       {"trials", r.trials},
                       {"mean_min_nf", nan_to_null(r.mean_min_n_f)},
                       {"std_min_nf", nan_to_null(r.std_min_n_f)},
                       {"saturated_count", r.saturated_count},
                       {"per_trial", per_trial}});
    table.rows.push_back({static_cast<double>(k), static_cast<double>(r.trials), r.mean_min_n_f,
                          r.std_min_n_f, static_cast<double>(r.saturated_count)});
    out << to_string(r.variant) << " k=" << k << " mean_min_nf=" << format_double(r.mean_min_n_f)
        << " saturated=" << r.saturated_count << '/' << r.trials << std::endl;
  }

  const json doc = {{"seed", cc.seed},
                    {"max_time", cc.max_time},
                    {"n_f_grid", cc.options.n_f_grid},
                    {"results", results}};
  {
    auto f = open_out(args.out);
    f << doc.dump(2) << '\n';
  }
  fs::path table_path = args.table;
  if (table_path.empty()) table_path = fs::path(args.out).replace_extension(".csv");
  write_table(table_path, table);
}

void run_learn(const LearnArgs& args, std::ostream& out) {
  ExperimentConfig cfg = load_config(args.config);
  if (args.seed) cfg.learning.seed = *args.seed;
  ModelSpec spec = cfg.model;
  if (spec.variant != Variant::DSEM) throw ConfigError("learn requires [model] variant = dsem");
  if (!cfg.n_h_explicit) spec.n_h = 20;

  const Index k = cfg.learning.memories;
  const Matrix episode = generate_memories(spec.n_f, k, cfg.learning.seed);
  const TrainingResult result =
      train_online(episode, spec, cfg.learning.config, derive_seed(cfg.learning.seed, {1}));

  save_synapses(args.out, result.syn);
  fs::create_directories(args.snapshots);
  {
    auto f = open_out(args.snapshots / "episode.mat");
    write_matrix(f, episode);
  }
  CsvTable metrics;
  metrics.header = {"epoch", "target_energy_gap"};
  for (const auto& m : result.metrics)
    metrics.rows.push_back({static_cast<double>(m.epoch), m.target_energy_gap});
  write_table(args.snapshots / "metrics.csv", metrics);

  for (const auto& snap : result.snapshots) {
    const std::string stem = "epoch_" + std::to_string(snap.epoch);
    save_synapses(args.snapshots / (stem + ".mat"), SynapseState{snap.xi, snap.phi});
    CsvTable trace;
    trace.header = {"sample", "energy"};
    for (std::size_t i = 0; i < snap.energy_trace.size(); ++i)
      trace.rows.push_back({static_cast<double>(i), snap.energy_trace[i]});
    write_table(args.snapshots / (stem + "_energy.csv"), trace);
  }

  // Free-running recall from a 10% noisy first memory.
  const ConsolidationReport rep = analyze_consolidation(result.syn, episode);
  SimulationOptions sim;
  sim.duration = cfg.simulation.duration;
  sim.dt = cfg.simulation.dt;
  sim.record_every = cfg.simulation.record_every;
  sim.overlap_patterns = episode;
  const NetworkState cue = init_from_cue(episode.col(0), 0.1, derive_seed(cfg.learning.seed, {2}),
                                         spec, result.syn, cfg.simulation.delay_init);
  RetrievalCriterion crit = cfg.retrieval;
  crit.max_time = sim.duration;
  const auto sequence = extract_sequence(simulate(spec, result.syn, cue, sim), crit);
  std::vector<Index> cycle(static_cast<std::size_t>(k));
  std::iota(cycle.begin(), cycle.end(), Index{0});

  json seq = json::array();
  for (Index i : sequence) seq.push_back(i + 1);
  json columns = json::array(), successor = json::array();
  for (Index c : rep.columns) columns.push_back(c + 1);
  for (Index s : rep.successor) successor.push_back(s + 1);
  const json summary = {{"memory_columns", columns},
                        {"alignment", rep.alignment},
                        {"distinct_columns", rep.distinct},
                        {"phi_successor", successor},
                        {"successor_map_ok", rep.successor_map_ok},
                        {"recalled_sequence", seq},
                        {"longest_in_order_run", longest_cycle_run(sequence, cycle)}};
  {
    auto f = open_out(args.snapshots / "consolidation.json");
    f << summary.dump(2) << '\n';
  }
  out << "trained " << cfg.learning.config.epochs << " epochs; synapses in " << args.out.string()
      << ", snapshots in " << args.snapshots.string() << '\n';
  out << "consolidation: " << summary.dump() << '\n';
}

}  // namespace gsemm::cli
