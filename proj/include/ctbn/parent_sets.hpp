#ifndef CTBN_PARENT_SETS_HPP
#define CTBN_PARENT_SETS_HPP

#include <optional>
#include <vector>

#include "ctbn/graph.hpp"

namespace ctbn {

// Candidate parent-set family for structure search.
struct SearchMode {
  enum class Kind { Exhaustive, Restricted, Greedy };

  Kind kind = Kind::Exhaustive;
  std::optional<Graph> prior_graph;  // Restricted: candidates within G0
  int max_parents = 2;               // Greedy: subsets of size <= K

  static SearchMode exhaustive() { return {Kind::Exhaustive, {}, 0}; }
  static SearchMode restricted(Graph g0) {
    return {Kind::Restricted, std::move(g0), 0};
  }
  static SearchMode greedy(int k) { return {Kind::Greedy, {}, k}; }
};

// Candidate subsets for `node` in a system of n nodes, ordered by size then
// lexicographically. Exhaustive enumerates the power set of V \ {node} and
// refuses systems with more than 20 potential parents; Restricted
// enumerates subsets of the prior graph's parents; Greedy enumerates all
// subsets of V \ {node} with at most K members.
std::vector<std::vector<int>> enumerate_parent_sets(const SearchMode& mode,
                                                    int n, int node);

// Union of all candidate members = the over-complete parent set the
// variational engine works with.
std::vector<int> overcomplete_parents(const SearchMode& mode, int n, int node);

}  // namespace ctbn

#endif
