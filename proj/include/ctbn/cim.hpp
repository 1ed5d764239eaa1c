#ifndef CTBN_CIM_HPP
#define CTBN_CIM_HPP

#include <cstddef>
#include <vector>

#include "ctbn/graph.hpp"
#include "ctbn/state_space.hpp"

namespace ctbn {

// Conditional intensity matrix of one node: a dense rate table
// R(x, x' | u) over parent configurations u. Parent configurations are
// mixed-radix indices over the ordered parent list, first parent least
// significant. Off-diagonal entries are nonnegative and each row sums to
// zero; the diagonal is maintained automatically.
class Cim {
 public:
  Cim(int node, std::vector<int> parents, int node_cardinality,
      std::vector<int> parent_cardinalities);

  int node() const { return node_; }
  const std::vector<int>& parents() const { return parents_; }
  const std::vector<int>& parent_cardinalities() const { return pcards_; }
  int cardinality() const { return card_; }
  std::size_t num_parent_configs() const { return nconfigs_; }

  double rate(std::size_t u, int x, int x_to) const {
    return rates_[(u * card_ + x) * card_ + x_to];
  }
  // Sets an off-diagonal rate and refreshes the row diagonal.
  void set_rate(std::size_t u, int x, int x_to, double r);

  // Total exit rate out of x given config u (= -R(x,x|u)).
  double exit_rate(std::size_t u, int x) const { return -rate(u, x, x); }

  std::size_t parent_config_index(std::vector<int> const& parent_states) const;

  // Throws InvalidModelError if off-diagonals are negative or row sums
  // exceed `tol` in magnitude.
  void validate(double tol = 1e-12) const;

 private:
  int node_;
  std::vector<int> parents_;
  std::vector<int> pcards_;
  int card_;
  std::size_t nconfigs_;
  std::vector<double> rates_;
};

// A CTBN: state space, graph, and one CIM per node whose parent list
// matches the graph.
class CtbnModel {
 public:
  CtbnModel(StateSpace space, Graph graph, std::vector<Cim> cims);

  const StateSpace& space() const { return space_; }
  const Graph& graph() const { return graph_; }
  const Cim& cim(int node) const { return cims_[node]; }
  int num_nodes() const { return space_.num_nodes(); }

  // Parent configuration index of `node` in a joint state (per-node state
  // vector).
  std::size_t parent_config_of(int node,
                               const std::vector<int>& joint_state) const;

 private:
  StateSpace space_;
  Graph graph_;
  std::vector<Cim> cims_;
};

// Glauber spin-flip dynamics: all nodes binary with labels {-1,+1}, flip
// rate 0.5 + 0.5*tanh(gamma * x * sum of parent labels).
Cim build_glauber_cim(const StateSpace& space, int node,
                      const std::vector<int>& parents, double gamma);

CtbnModel build_glauber_model(const Graph& graph, double gamma);

}  // namespace ctbn

#endif
