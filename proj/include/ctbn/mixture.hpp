#ifndef CTBN_MIXTURE_HPP
#define CTBN_MIXTURE_HPP

#include <vector>

#include "ctbn/parent_sets.hpp"

namespace ctbn {

// Distribution over candidate parent subsets of one node.
struct NodeMixture {
  std::vector<std::vector<int>> subsets;  // canonical order (size, lex)
  std::vector<double> weights;            // on the probability simplex

  int index_of(const std::vector<int>& subset) const;
  // Index of the maximal-weight subset; ties go to the smaller subset,
  // then lexicographic (canonical order already encodes both).
  int argmax() const;
};

// The learned object: one simplex distribution per node.
struct MixtureWeights {
  std::vector<NodeMixture> nodes;

  static MixtureWeights uniform(
      const std::vector<std::vector<std::vector<int>>>& families);
  // All mass on `chosen[i]` (an index into the family of node i).
  static MixtureWeights degenerate(
      const std::vector<std::vector<std::vector<int>>>& families,
      const std::vector<int>& chosen);

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  void validate(double tol = 1e-9) const;
};

// Edge probability matrix p(e_ij = 1) = sum of pi_j over subsets containing
// i; diagonal zero. Row index = candidate parent, column = child.
std::vector<std::vector<double>> edge_probabilities(const MixtureWeights& pi);

// Per-node argmax subsets as a graph.
Graph map_graph(const MixtureWeights& pi);

}  // namespace ctbn

#endif
