#include "gsemm/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gsemm/random.hpp"

namespace gsemm {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::FullGSEMM: return "gsemm";
    case Variant::LISEM: return "lisem";
    case Variant::DSEM: return "dsem";
  }
  return "unknown";
}

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Tanh: return "tanh";
    case Activation::Softmax: return "softmax";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "gsemm" || name == "full" || name == "FullGSEMM") return Variant::FullGSEMM;
  if (name == "lisem" || name == "LISEM") return Variant::LISEM;
  if (name == "dsem" || name == "DSEM") return Variant::DSEM;
  throw InvalidArgument("unknown variant '" + std::string(name) + "'");
}

Activation parse_activation(std::string_view name) {
  if (name == "identity") return Activation::Identity;
  if (name == "tanh") return Activation::Tanh;
  if (name == "softmax") return Activation::Softmax;
  throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

void ModelSpec::validate() const {
  if (n_f < 1 || n_h < 1) throw InvalidArgument("n_f and n_h must be >= 1");
  if (!(tau_f > 0.0) || !(tau_h > 0.0) || !(tau_d > 0.0))
    throw InvalidArgument("timescales must be positive");
  if (!(alpha_s > 0.0)) throw InvalidArgument("alpha_s must be positive");
  if (!std::isfinite(alpha_c) || !std::isfinite(gamma) || !(gamma > 0.0))
    throw InvalidArgument("alpha_c must be finite and gamma positive");
  if (!(tau_d > tau_f) || !(tau_d > tau_h))
    throw InvalidArgument("tau_d must exceed tau_f and tau_h");
}

Activation ModelSpec::feature_activation() const noexcept {
  switch (variant) {
    case Variant::LISEM: return Activation::Tanh;
    case Variant::DSEM: return Activation::Identity;
    case Variant::FullGSEMM: return sigma_f;
  }
  return sigma_f;
}

Activation ModelSpec::hidden_activation() const noexcept {
  switch (variant) {
    case Variant::LISEM: return Activation::Identity;
    case Variant::DSEM: return Activation::Softmax;
    case Variant::FullGSEMM: return sigma_h;
  }
  return sigma_h;
}

ModelSpec ModelSpec::lisem(Index n_f, Index n_h) {
  ModelSpec s;
  s.variant = Variant::LISEM;
  s.n_f = n_f;
  s.n_h = n_h;
  s.alpha_s = 0.05;
  s.alpha_c = 4.9;
  s.gamma = 1.0;
  s.tau_f = 1.0;
  s.tau_d = 100.0;
  s.sigma_f = Activation::Tanh;
  s.sigma_h = Activation::Identity;
  return s;
}

ModelSpec ModelSpec::dsem(Index n_f, Index n_h) {
  ModelSpec s = lisem(n_f, n_h);
  s.variant = Variant::DSEM;
  s.alpha_s = 1.0;
  s.sigma_f = Activation::Identity;
  s.sigma_h = Activation::Softmax;
  return s;
}

void SynapseState::validate(const ModelSpec& spec) const {
  if (xi.rows() != spec.n_f || xi.cols() != spec.n_h) {
    std::ostringstream os;
    os << "xi must be " << spec.n_f << "x" << spec.n_h << ", got " << xi.rows() << "x"
       << xi.cols();
    throw InvalidArgument(os.str());
  }
  if (phi.rows() != spec.n_h || phi.cols() != spec.n_h) {
    std::ostringstream os;
    os << "phi must be " << spec.n_h << "x" << spec.n_h << ", got " << phi.rows() << "x"
       << phi.cols();
    throw InvalidArgument(os.str());
  }
}

bool NetworkState::all_finite() const {
  return v_f.allFinite() && v_h.allFinite() && v_d.allFinite();
}

EpisodeGraph::EpisodeGraph(Index n_nodes, std::vector<Edge> edges)
    : n_nodes_(n_nodes), edges_(std::move(edges)) {
  if (n_nodes_ < 0) throw InvalidArgument("negative node count");
  for (const auto& [from, to] : edges_) {
    if (from < 0 || to < 0 || from >= n_nodes_ || to >= n_nodes_)
      throw InvalidArgument("edge index out of range");
    if (from == to) throw InvalidArgument("self-loops are not allowed");
  }
}

bool EpisodeGraph::has_edge(Index from, Index to) const {
  return std::find(edges_.begin(), edges_.end(), Edge{from, to}) != edges_.end();
}

Matrix EpisodeGraph::adjacency() const {
  Matrix g = Matrix::Zero(n_nodes_, n_nodes_);
  for (const auto& [from, to] : edges_) g(from, to) = 1.0;
  return g;
}

Matrix generate_memories(Index n_f, Index n_memories, std::uint64_t seed) {
  if (n_f < 1 || n_memories < 1) throw InvalidArgument("memory dimensions must be >= 1");
  Rng rng(seed);
  Matrix m(n_f, n_memories);
  // Column-major fill so that the first memory does not depend on how many follow.
  for (Index j = 0; j < n_memories; ++j)
    for (Index i = 0; i < n_f; ++i) m(i, j) = rng.sign();
  return m;
}

EpisodeGraph build_episode_graph(const std::vector<std::vector<Index>>& cycles,
                                 std::optional<Index> n_nodes) {
  std::set<Index> seen;
  std::vector<EpisodeGraph::Edge> edges;
  Index max_index = -1;
  for (const auto& cycle : cycles) {
    for (Index idx : cycle) {
      if (idx < 0) throw InvalidArgument("negative memory index in cycle");
      if (!seen.insert(idx).second)
        throw InvalidArgument("memory index " + std::to_string(idx) +
                              " repeats within or across cycles");
      max_index = std::max(max_index, idx);
    }
    if (cycle.size() == 1) throw InvalidArgument("a one-element cycle is a self-loop");
    for (std::size_t i = 0; i < cycle.size(); ++i)
      edges.emplace_back(cycle[i], cycle[(i + 1) % cycle.size()]);
  }
  const Index nodes = n_nodes.value_or(max_index + 1);
  if (nodes <= max_index) throw InvalidArgument("cycle index exceeds node count");
  return EpisodeGraph(nodes, std::move(edges));
}

Matrix build_phi(const EpisodeGraph& graph, double alpha_s) {
  if (!(alpha_s > 0.0)) throw InvalidArgument("alpha_s must be positive");
  return graph.adjacency() / std::sqrt(alpha_s);
}

SynapseState preload(const Matrix& memories, const EpisodeGraph& graph, double alpha_s) {
  if (graph.n_nodes() != memories.cols())
    throw InvalidArgument("episode graph must have one node per memory");
  return SynapseState{memories, build_phi(graph, alpha_s)};
}

}  // namespace gsemm
