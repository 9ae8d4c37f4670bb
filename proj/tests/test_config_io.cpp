#include <doctest.h>

#include <limits>
#include <sstream>

#include <gsemm/config.hpp>
#include <gsemm/io.hpp>
#include <gsemm/model.hpp>
#include <gsemm/random.hpp>

using namespace gsemm;

TEST_SUITE("config") {

TEST_CASE("empty config gives the defaults") {
  const ExperimentConfig c = parse_config("");
  CHECK(c.model.variant == Variant::LISEM);
  CHECK(c.model.n_f == 100);
  CHECK(c.model.alpha_s == 0.05);
  CHECK(c.memories.count == 7);
  CHECK(c.memories.cycles.size() == 2);
  CHECK(c.retrieval.max_time == 300.0);
  CHECK(c.simulation.delay_init == DelayInit::Rest);
}

TEST_CASE("full config") {
  const ExperimentConfig c = parse_config(R"(
# comment
[model]
variant = dsem
n_f = 64
alpha_c = 3.5
tau_d = 50

[memories]
seed = 9
count = 5
cycles = 1 2; 3 4 5

[simulation]
duration = 120
cue = 3
noise = 0.1
delay_init = matched

[retrieval]
threshold = 0.8
min_dwell = 2

[learning]
epochs = 7
snapshot_epochs = 0 7

[capacity]
variant = lisem
k = 4..6
trials = 9
max_time = 500
)");
  CHECK(c.model.variant == Variant::DSEM);
  CHECK(c.model.alpha_s == 1.0);  // dsem default
  CHECK(c.model.alpha_c == 3.5);
  CHECK(c.model.n_h == 5);
  CHECK(c.memories.cycles == std::vector<std::vector<Index>>{{0, 1}, {2, 3, 4}});
  CHECK(c.simulation.cue == 2);
  CHECK(c.simulation.delay_init == DelayInit::Matched);
  CHECK(c.retrieval.overlap_threshold == 0.8);
  CHECK(c.retrieval.max_time == 120.0);
  CHECK(c.learning.config.epochs == 7);
  CHECK(c.learning.config.snapshot_epochs == std::vector<int>{0, 7});
  CHECK(c.capacity.variant == Variant::LISEM);
  CHECK(c.capacity.k_min == 4);
  CHECK(c.capacity.k_max == 6);
  CHECK(c.capacity.max_time == 500.0);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("[model]\nfoo = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nonsense]\na = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nn_f = ten\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nalpha_s = 1.0x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nvariant = hopfield\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nsigma_f = tanh\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[memories]\ncycles = 0 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[memories]\ncount = 3\ncycles = 1 2 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[simulation]\ncue = 8\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[simulation]\nnoise = 0.7\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\ntau_d = 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[learning]\nbeta_c = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("full model activations are configurable") {
  const ExperimentConfig c = parse_config("[model]\nvariant = full\nsigma_f = identity\nsigma_h = softmax\n");
  CHECK(c.model.variant == Variant::FullGSEMM);
  CHECK(c.model.sigma_f == Activation::Identity);
  CHECK(c.model.sigma_h == Activation::Softmax);
}

TEST_CASE("episode length ranges") {
  CHECK(parse_k_range("3..10") == std::pair<Index, Index>{3, 10});
  CHECK(parse_k_range("5") == std::pair<Index, Index>{5, 5});
  CHECK_THROWS_AS(parse_k_range("1..3"), ConfigError);
  CHECK_THROWS_AS(parse_k_range("6..3"), ConfigError);
  CHECK_THROWS_AS(parse_k_range("a..b"), ConfigError);
}

}

TEST_SUITE("io") {

TEST_CASE("doubles print with round-trip precision") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv round trip is exact") {
  CsvTable t;
  t.header = {"time", "m_1", "E_total"};
  Rng rng(1);
  for (int i = 0; i < 50; ++i)
    t.rows.push_back({rng.uniform(-1e5, 1e5), rng.uniform01() * 1e-300, std::ldexp(rng.uniform01(), -1070)});
  t.rows.push_back({std::numeric_limits<double>::quiet_NaN(), -0.0, 1e308});
  std::stringstream ss;
  write_csv(ss, t);
  const CsvTable back = read_csv(ss);
  CHECK(back.header == t.header);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t r = 0; r + 1 < t.rows.size(); ++r)
    for (std::size_t c = 0; c < 3; ++c) CHECK(back.rows[r][c] == t.rows[r][c]);
  CHECK(std::isnan(back.rows.back()[0]));
  CHECK(back.rows.back()[2] == 1e308);
}

TEST_CASE("csv errors") {
  std::stringstream bad("a,b\n1,2,3\n");
  CHECK_THROWS_AS(read_csv(bad), IoError);
  std::stringstream junk("a\nxyz\n");
  CHECK_THROWS_AS(read_csv(junk), IoError);
  std::stringstream empty;
  CHECK_THROWS_AS(read_csv(empty), IoError);
  CsvTable ragged{{"a", "b"}, {{1.0}}};
  std::stringstream out;
  CHECK_THROWS_AS(write_csv(out, ragged), IoError);
}

TEST_CASE("trajectory table layout") {
  Trajectory tr;
  tr.times = {0.0, 0.1};
  tr.overlaps = {Vector::Zero(3), Vector::Ones(3)};
  tr.states.resize(2);
  const CsvTable t = trajectory_table(tr);
  CHECK(t.header == std::vector<std::string>{"time", "m_1", "m_2", "m_3", "E_total", "E_assoc",
                                             "E_seq", "E_c", "F", "G"});
  CHECK(std::isnan(t.rows[0][4]));
  tr.energies = {EnergyReport{1, 2, 3, 4, 5, 6}, EnergyReport{}};
  CHECK(trajectory_table(tr).rows[0][9] == 6.0);
}

TEST_CASE("matrix and synapse files") {
  Rng rng(4);
  Matrix m(3, 4);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 4; ++j) m(i, j) = rng.uniform(-10, 10);
  std::stringstream ss;
  write_matrix(ss, m);
  CHECK(read_matrix(ss) == m);

  SynapseState syn{generate_memories(5, 2, 1), Matrix::Identity(2, 2) * 0.3};
  std::stringstream s2;
  write_synapses(s2, syn);
  const SynapseState back = read_synapses(s2);
  CHECK(back.xi == syn.xi);
  CHECK(back.phi == syn.phi);

  std::stringstream truncated("2 2\n1 2 3\n");
  CHECK_THROWS_AS(read_matrix(truncated), IoError);
  std::stringstream mismatch("2 2\n1 2\n3 4\n3 3\n0 0 0\n0 0 0\n0 0 0\n");
  CHECK_THROWS_AS(read_synapses(mismatch), IoError);
  CHECK_THROWS_AS(load_synapses("/nonexistent/syn.mat"), IoError);
}

}
