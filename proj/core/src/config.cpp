#include "gsemm/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gsemm {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"model",
       {"variant", "n_f", "n_h", "alpha_s", "alpha_c", "gamma", "tau_f", "tau_h", "tau_d",
        "sigma_f", "sigma_h"}},
      {"memories", {"seed", "count", "cycles"}},
      {"simulation",
       {"duration", "dt", "record_every", "cue", "noise", "cue_seed", "delay_init",
        "record_energy"}},
      {"retrieval", {"threshold", "min_dwell", "max_time"}},
      {"fixed_points", {"step", "tol", "max_iters", "every"}},
      {"learning",
       {"memories", "seed", "tau_l_xi", "tau_l_phi", "beta_c", "steps_per_memory", "epochs",
        "init_range", "dt", "learning_dt", "snapshot_epochs", "energy_samples"}},
      {"capacity",
       {"variant", "k", "trials", "seed", "workers", "noise", "refine_step", "alpha_c", "dt",
        "delay_init", "max_time", "grid"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  std::optional<std::string> raw(const std::string& key) const {
    if (!tree_) return std::nullopt;
    auto v = tree_->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return trim(*v);
  }

  template <class T>
  void read(const std::string& key, T& out) const {
    if (auto v = raw(key)) out = convert<T>(key, *v);
  }

  template <class T>
  T convert(const std::string& key, const std::string& text) const {
    if constexpr (std::is_same_v<T, bool>) {
      if (text == "true" || text == "1" || text == "yes") return true;
      if (text == "false" || text == "0" || text == "no") return false;
      fail(key, text);
    } else if constexpr (std::is_same_v<T, double>) {
      try {
        std::size_t used = 0;
        const double d = std::stod(text, &used);
        if (used == text.size()) return d;
      } catch (const std::exception&) {
      }
      fail(key, text);
    } else {
      T value{};
      const auto* end = text.data() + text.size();
      auto [ptr, ec] = std::from_chars(text.data(), end, value);
      if (ec != std::errc() || ptr != end) fail(key, text);
      return value;
    }
    return T{};
  }

  [[noreturn]] void fail(const std::string& key, const std::string& text) const {
    throw ConfigError("[" + name_ + "] " + key + ": cannot parse '" + text + "'");
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
};

std::vector<std::int64_t> parse_int_list(const Section& sec, const std::string& key,
                                         const std::string& text) {
  std::vector<std::int64_t> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    if (tok.back() == ',') tok.pop_back();
    if (!tok.empty()) out.push_back(sec.convert<std::int64_t>(key, tok));
  }
  return out;
}

// "1 2 3; 4 5 6 7" with 1-based indices.
std::vector<std::vector<Index>> parse_cycles(const Section& sec, const std::string& text) {
  std::vector<std::vector<Index>> cycles;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ';')) {
    if (trim(part).empty()) continue;
    std::vector<Index> cycle;
    for (auto v : parse_int_list(sec, "cycles", part)) {
      if (v < 1) throw ConfigError("[memories] cycles: indices start at 1");
      cycle.push_back(static_cast<Index>(v - 1));
    }
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

template <class Parse>
auto wrap(const std::string& where, const std::string& text, Parse parse) {
  try {
    return parse(text);
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

std::pair<Index, Index> parse_k_range(const std::string& text) {
  const std::string t = trim(text);
  auto to_index = [&](std::string_view s) {
    Index v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 2)
      throw ConfigError("episode length range '" + text + "' is not N or A..B with values >= 2");
    return v;
  };
  const auto dots = t.find("..");
  if (dots == std::string::npos) {
    const Index k = to_index(t);
    return {k, k};
  }
  const Index a = to_index(std::string_view(t).substr(0, dots));
  const Index b = to_index(std::string_view(t).substr(dots + 2));
  if (b < a) throw ConfigError("episode length range '" + text + "' is decreasing");
  return {a, b};
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
  }
  for (const auto& [name, body] : tree) {
    auto it = known_keys().find(name);
    if (it == known_keys().end()) {
      if (body.empty()) throw ConfigError("key '" + name + "' outside any section");
      throw ConfigError("unknown section [" + name + "]");
    }
    for (const auto& [key, value] : body)
      if (!it->second.contains(key)) throw ConfigError("unknown key [" + name + "] " + key);
  }
  auto section = [&](const std::string& name) {
    auto child = tree.get_child_optional(name);
    return Section(child ? &*child : nullptr, name);
  };

  ExperimentConfig cfg;

  const Section mem = section("memories");
  mem.read("seed", cfg.memories.seed);
  mem.read("count", cfg.memories.count);
  if (auto c = mem.raw("cycles")) cfg.memories.cycles = parse_cycles(mem, *c);
  if (cfg.memories.count < 1) throw ConfigError("[memories] count must be >= 1");

  const Section model = section("model");
  Variant variant = Variant::LISEM;
  if (auto v = model.raw("variant"))
    variant = wrap("[model] variant", *v, [](const std::string& s) { return parse_variant(s); });
  Index n_f = 100;
  model.read("n_f", n_f);
  cfg.n_h_explicit = model.raw("n_h").has_value();
  Index n_h = cfg.memories.count;
  model.read("n_h", n_h);
  cfg.model = variant == Variant::DSEM ? ModelSpec::dsem(n_f, n_h) : ModelSpec::lisem(n_f, n_h);
  if (variant == Variant::FullGSEMM) {
    cfg.model.variant = Variant::FullGSEMM;
    cfg.model.sigma_h = Activation::Softmax;
  }
  model.read("alpha_s", cfg.model.alpha_s);
  model.read("alpha_c", cfg.model.alpha_c);
  model.read("gamma", cfg.model.gamma);
  model.read("tau_f", cfg.model.tau_f);
  model.read("tau_h", cfg.model.tau_h);
  model.read("tau_d", cfg.model.tau_d);
  for (const char* key : {"sigma_f", "sigma_h"}) {
    auto v = model.raw(key);
    if (!v) continue;
    if (variant != Variant::FullGSEMM)
      throw ConfigError(std::string("[model] ") + key + " is fixed by the variant; use variant = full");
    const Activation a = wrap(std::string("[model] ") + key, *v,
                              [](const std::string& s) { return parse_activation(s); });
    (std::string(key) == "sigma_f" ? cfg.model.sigma_f : cfg.model.sigma_h) = a;
  }

  const Section sim = section("simulation");
  sim.read("duration", cfg.simulation.duration);
  sim.read("dt", cfg.simulation.dt);
  sim.read("record_every", cfg.simulation.record_every);
  if (auto c = sim.raw("cue")) {
    const auto one_based = sim.convert<std::int64_t>("cue", *c);
    if (one_based < 1 || one_based > cfg.memories.count)
      throw ConfigError("[simulation] cue must name a memory between 1 and count");
    cfg.simulation.cue = static_cast<Index>(one_based - 1);
  }
  sim.read("noise", cfg.simulation.noise);
  sim.read("cue_seed", cfg.simulation.cue_seed);
  if (auto v = sim.raw("delay_init"))
    cfg.simulation.delay_init = wrap("[simulation] delay_init", *v,
                                     [](const std::string& s) { return parse_delay_init(s); });
  sim.read("record_energy", cfg.simulation.record_energy);

  const Section ret = section("retrieval");
  ret.read("threshold", cfg.retrieval.overlap_threshold);
  ret.read("min_dwell", cfg.retrieval.min_dwell);
  if (ret.raw("max_time"))
    ret.read("max_time", cfg.retrieval.max_time);
  else
    cfg.retrieval.max_time = cfg.simulation.duration;

  const Section fp = section("fixed_points");
  fp.read("step", cfg.fixed_points.options.step);
  fp.read("tol", cfg.fixed_points.options.tol);
  fp.read("max_iters", cfg.fixed_points.options.max_iters);
  fp.read("every", cfg.fixed_points.every);

  const Section learn = section("learning");
  LearningConfig& lc = cfg.learning.config;
  learn.read("memories", cfg.learning.memories);
  learn.read("seed", cfg.learning.seed);
  learn.read("tau_l_xi", lc.tau_l_xi);
  learn.read("tau_l_phi", lc.tau_l_phi);
  learn.read("beta_c", lc.beta_c);
  learn.read("steps_per_memory", lc.steps_per_memory);
  learn.read("epochs", lc.epochs);
  learn.read("init_range", lc.init_range);
  learn.read("dt", lc.dt);
  learn.read("learning_dt", lc.learning_dt);
  learn.read("energy_samples", lc.energy_samples_per_memory);
  if (auto v = learn.raw("snapshot_epochs")) {
    lc.snapshot_epochs.clear();
    for (auto e : parse_int_list(learn, "snapshot_epochs", *v)) lc.snapshot_epochs.push_back(static_cast<int>(e));
  }

  const Section cap = section("capacity");
  CapacityConfig& cc = cfg.capacity;
  if (auto v = cap.raw("variant"))
    cc.variant = wrap("[capacity] variant", *v, [](const std::string& s) { return parse_variant(s); });
  if (auto v = cap.raw("k")) std::tie(cc.k_min, cc.k_max) = parse_k_range(*v);
  cap.read("trials", cc.trials);
  cap.read("seed", cc.seed);
  cap.read("workers", cc.options.workers);
  cap.read("noise", cc.options.noise_fraction);
  cap.read("refine_step", cc.options.refine_step);
  cap.read("dt", cc.options.dt);
  cap.read("max_time", cc.max_time);
  if (auto v = cap.raw("alpha_c")) cc.options.alpha_c = cap.convert<double>("alpha_c", *v);
  if (auto v = cap.raw("delay_init"))
    cc.options.delay_init = wrap("[capacity] delay_init", *v,
                                 [](const std::string& s) { return parse_delay_init(s); });
  if (auto v = cap.raw("grid")) {
    cc.options.n_f_grid.clear();
    for (auto n : parse_int_list(cap, "grid", *v)) cc.options.n_f_grid.push_back(static_cast<Index>(n));
  }

  try {
    cfg.model.validate();
    cfg.retrieval.validate();
    lc.validate();
    cc.options.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.simulation.duration <= 0.0 || cfg.simulation.dt <= 0.0 || cfg.simulation.record_every < 1)
    throw ConfigError("[simulation] duration, dt and record_every must be positive");
  if (!(cfg.simulation.noise >= 0.0) || cfg.simulation.noise >= 0.5)
    throw ConfigError("[simulation] noise must lie in [0, 0.5)");
  if (cfg.fixed_points.every < 1) throw ConfigError("[fixed_points] every must be >= 1");
  if (!(cc.max_time > 0.0)) throw ConfigError("[capacity] max_time must be positive");
  if (cc.trials < 1) throw ConfigError("[capacity] trials must be >= 1");
  if (cfg.learning.memories < 1) throw ConfigError("[learning] memories must be >= 1");
  for (const auto& cycle : cfg.memories.cycles)
    for (Index i : cycle)
      if (i >= cfg.memories.count) throw ConfigError("[memories] cycles name a memory beyond count");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

}  // namespace gsemm
