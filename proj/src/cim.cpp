#include "ctbn/cim.hpp"

#include <cmath>
#include <string>

#include "ctbn/errors.hpp"
#include "ctbn/numerics.hpp"

namespace ctbn {

Cim::Cim(int node, std::vector<int> parents, int node_cardinality,
         std::vector<int> parent_cardinalities)
    : node_(node),
      parents_(std::move(parents)),
      pcards_(std::move(parent_cardinalities)),
      card_(node_cardinality) {
  if (parents_.size() != pcards_.size()) {
    throw InvalidModelError("parent list / cardinality list size mismatch");
  }
  nconfigs_ = product_of(pcards_);
  rates_.assign(nconfigs_ * card_ * card_, 0.0);
}

void Cim::set_rate(std::size_t u, int x, int x_to, double r) {
  if (x == x_to) throw InvalidModelError("diagonal is derived, not set");
  if (r < 0.0) throw InvalidModelError("negative rate");
  rates_[(u * card_ + x) * card_ + x_to] = r;
  double total = 0.0;
  for (int y = 0; y < card_; ++y) {
    if (y != x) total += rates_[(u * card_ + x) * card_ + y];
  }
  rates_[(u * card_ + x) * card_ + x] = -total;
}

std::size_t Cim::parent_config_index(
    std::vector<int> const& parent_states) const {
  return mixed_radix_index(parent_states, pcards_);
}

void Cim::validate(double tol) const {
  for (std::size_t u = 0; u < nconfigs_; ++u) {
    for (int x = 0; x < card_; ++x) {
      double sum = 0.0;
      for (int y = 0; y < card_; ++y) {
        const double r = rate(u, x, y);
        if (y != x && r < 0.0) {
          throw InvalidModelError("negative off-diagonal rate");
        }
        sum += r;
      }
      if (std::abs(sum) > tol) {
        throw InvalidModelError("CIM row sum " + std::to_string(sum) +
                                " exceeds tolerance");
      }
    }
  }
}

CtbnModel::CtbnModel(StateSpace space, Graph graph, std::vector<Cim> cims)
    : space_(std::move(space)), graph_(std::move(graph)),
      cims_(std::move(cims)) {
  if (static_cast<int>(cims_.size()) != space_.num_nodes() ||
      graph_.num_nodes() != space_.num_nodes()) {
    throw InvalidModelError("node count mismatch between space/graph/CIMs");
  }
  for (int i = 0; i < space_.num_nodes(); ++i) {
    if (cims_[i].node() != i) throw InvalidModelError("CIM order mismatch");
    if (cims_[i].parents() != graph_.parents(i)) {
      throw InvalidModelError("CIM parents do not match graph parents of " +
                              std::to_string(i));
    }
    if (cims_[i].cardinality() != space_.cardinality(i)) {
      throw InvalidModelError("CIM cardinality mismatch");
    }
    cims_[i].validate();
  }
}

std::size_t CtbnModel::parent_config_of(
    int node, const std::vector<int>& joint_state) const {
  const auto& parents = graph_.parents(node);
  std::size_t idx = 0;
  std::size_t stride = 1;
  for (int p : parents) {
    idx += stride * static_cast<std::size_t>(joint_state[p]);
    stride *= static_cast<std::size_t>(space_.cardinality(p));
  }
  return idx;
}

Cim build_glauber_cim(const StateSpace& space, int node,
                      const std::vector<int>& parents, double gamma) {
  if (!std::isfinite(gamma)) throw InvalidModelError("gamma must be finite");
  auto check_spin = [&](int v) {
    if (space.cardinality(v) != 2 || space.label(v, 0) != -1.0 ||
        space.label(v, 1) != 1.0) {
      throw InvalidModelError("Glauber dynamics needs binary {-1,+1} nodes");
    }
  };
  check_spin(node);
  std::vector<int> pcards;
  for (int p : parents) {
    check_spin(p);
    pcards.push_back(2);
  }
  Cim cim(node, parents, 2, pcards);
  const std::size_t nconf = cim.num_parent_configs();
  std::vector<int> digits(parents.size());
  for (std::size_t u = 0; u < nconf; ++u) {
    mixed_radix_decode(u, pcards, digits);
    double field = 0.0;
    for (std::size_t k = 0; k < parents.size(); ++k) {
      field += space.label(parents[k], digits[k]);
    }
    for (int x = 0; x < 2; ++x) {
      const double spin = space.label(node, x);
      cim.set_rate(u, x, 1 - x, 0.5 + 0.5 * std::tanh(gamma * spin * field));
    }
  }
  return cim;
}

CtbnModel build_glauber_model(const Graph& graph, double gamma) {
  StateSpace space = StateSpace::binary_spin(graph.num_nodes());
  std::vector<Cim> cims;
  cims.reserve(graph.num_nodes());
  for (int i = 0; i < graph.num_nodes(); ++i) {
    cims.push_back(build_glauber_cim(space, i, graph.parents(i), gamma));
  }
  return CtbnModel(std::move(space), graph, std::move(cims));
}

}  // namespace ctbn
