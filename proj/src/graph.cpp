#include "ctbn/graph.hpp"

#include <algorithm>
#include <string>

#include "ctbn/errors.hpp"

namespace ctbn {

Graph::Graph(int num_nodes, const std::vector<std::pair<int, int>>& edges)
    : n_(num_nodes), parents_(num_nodes), children_(num_nodes) {
  if (num_nodes < 1) throw InvalidModelError("graph needs >= 1 node");
  for (const auto& [from, to] : edges) {
    if (from < 0 || from >= n_ || to < 0 || to >= n_) {
      throw InvalidModelError("edge endpoint out of range");
    }
    if (from == to) throw InvalidModelError("self-loops are not allowed");
    parents_[to].push_back(from);
    children_[from].push_back(to);
  }
  for (auto& p : parents_) {
    std::sort(p.begin(), p.end());
    if (std::adjacent_find(p.begin(), p.end()) != p.end()) {
      throw InvalidModelError("duplicate edge");
    }
    num_edges_ += static_cast<int>(p.size());
  }
  for (auto& c : children_) std::sort(c.begin(), c.end());
}

Graph Graph::complete(int num_nodes) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < num_nodes; ++i) {
    for (int j = 0; j < num_nodes; ++j) {
      if (i != j) edges.emplace_back(i, j);
    }
  }
  return Graph(num_nodes, edges);
}

bool Graph::has_edge(int from, int to) const {
  const auto& p = parents_[to];
  return std::binary_search(p.begin(), p.end(), from);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int to = 0; to < n_; ++to) {
    for (int from : parents_[to]) out.emplace_back(from, to);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Graph random_graph(int n, int max_in_degree, Rng& rng) {
  if (n < 1) throw InvalidModelError("random_graph: n >= 1 required");
  if (max_in_degree > n - 1) {
    throw InvalidModelError("random_graph: max_in_degree must be <= n-1");
  }
  std::vector<std::pair<int, int>> edges;
  std::vector<int> pool;
  for (int node = 0; node < n; ++node) {
    const int degree =
        static_cast<int>(rng.uniform_int(
            static_cast<std::uint64_t>(max_in_degree) + 1));
    pool.clear();
    for (int j = 0; j < n; ++j) {
      if (j != node) pool.push_back(j);
    }
    // Partial Fisher-Yates draw of `degree` parents without replacement.
    for (int k = 0; k < degree; ++k) {
      const auto pick =
          k + static_cast<int>(rng.uniform_int(pool.size() - k));
      std::swap(pool[k], pool[pick]);
      edges.emplace_back(pool[k], node);
    }
  }
  return Graph(n, edges);
}

}  // namespace ctbn
