#ifndef CTBN_GRAPH_HPP
#define CTBN_GRAPH_HPP

#include <utility>
#include <vector>

#include "ctbn/rng.hpp"

namespace ctbn {

// Directed graph over nodes 0..n-1 without self-loops. Parent and child
// lists are kept sorted.
class Graph {
 public:
  explicit Graph(int num_nodes,
                 const std::vector<std::pair<int, int>>& edges = {});

  // Fully connected directed graph (every ordered pair).
  static Graph complete(int num_nodes);

  int num_nodes() const { return n_; }
  int num_edges() const { return num_edges_; }
  const std::vector<int>& parents(int node) const { return parents_[node]; }
  const std::vector<int>& children(int node) const { return children_[node]; }
  bool has_edge(int from, int to) const;

  // All edges as (from, to), sorted.
  std::vector<std::pair<int, int>> edges() const;

  bool operator==(const Graph&) const = default;

 private:
  int n_;
  int num_edges_ = 0;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
};

// Random graph with per-node in-degree uniform on {0,...,max_in_degree} and
// parents drawn uniformly without replacement. Deterministic given the rng
// state.
Graph random_graph(int n, int max_in_degree, Rng& rng);

}  // namespace ctbn

#endif
