#ifndef CTBN_STATS_HPP
#define CTBN_STATS_HPP

#include <cstddef>
#include <vector>

#include "ctbn/graph.hpp"
#include "ctbn/state_space.hpp"
#include "ctbn/trajectory.hpp"

namespace ctbn {

// Transition counts M(x,x'|u) and dwell times T(x|u) of one node relative
// to a declared parent context (often the over-complete parent set). Counts
// are real-valued so the same container carries expected statistics.
struct NodeStats {
  int node = 0;
  std::vector<int> parents;       // sorted node ids
  std::vector<int> parent_cards;  // cardinalities, same order
  int card = 0;
  std::size_t nconfigs = 1;
  std::vector<double> m;  // [u][x][x'], diagonal slots unused (0)
  std::vector<double> t;  // [u][x]

  NodeStats() = default;
  NodeStats(int node, std::vector<int> parents, std::vector<int> parent_cards,
            int card);

  double& M(std::size_t u, int x, int y) {
    return m[(u * card + x) * card + y];
  }
  double M(std::size_t u, int x, int y) const {
    return m[(u * card + x) * card + y];
  }
  double& T(std::size_t u, int x) { return t[u * card + x]; }
  double T(std::size_t u, int x) const { return t[u * card + x]; }

  double total_time() const;
  double total_transitions() const;

  NodeStats& operator+=(const NodeStats& other);
};

// Per-node statistics tables under a common graph.
struct SufficientStats {
  std::vector<NodeStats> nodes;

  SufficientStats() = default;
  SufficientStats(const StateSpace& space, const Graph& graph);

  SufficientStats& operator+=(const SufficientStats& other);
};

// Exact counting of one trajectory against each node's parent context in
// `graph`. Dwell time covers [0, t_end] including the final segment.
SufficientStats count_statistics(const Trajectory& traj, const Graph& graph,
                                 const StateSpace& space);

void accumulate_statistics(SufficientStats& stats, const Trajectory& traj,
                           const StateSpace& space);

// Marginal slice over a parent subset: sums M and T over all full
// configurations consistent with each sub-configuration. `subset` must be a
// subset of the declared parents (sorted ids).
NodeStats marginalize_stats(const NodeStats& stats,
                            const std::vector<int>& subset);

}  // namespace ctbn

#endif
