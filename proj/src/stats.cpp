#include "ctbn/stats.hpp"

#include <algorithm>
#include <string>

#include "ctbn/errors.hpp"
#include "ctbn/numerics.hpp"

namespace ctbn {

NodeStats::NodeStats(int node_, std::vector<int> parents_,
                     std::vector<int> parent_cards_, int card_)
    : node(node_), parents(std::move(parents_)),
      parent_cards(std::move(parent_cards_)), card(card_) {
  nconfigs = product_of(parent_cards);
  m.assign(nconfigs * card * card, 0.0);
  t.assign(nconfigs * card, 0.0);
}

double NodeStats::total_time() const {
  double sum = 0.0;
  for (double v : t) sum += v;
  return sum;
}

double NodeStats::total_transitions() const {
  double sum = 0.0;
  for (double v : m) sum += v;
  return sum;
}

NodeStats& NodeStats::operator+=(const NodeStats& other) {
  if (other.node != node || other.parents != parents || other.card != card) {
    throw InvalidModelError("cannot merge statistics with different shapes");
  }
  for (std::size_t i = 0; i < m.size(); ++i) m[i] += other.m[i];
  for (std::size_t i = 0; i < t.size(); ++i) t[i] += other.t[i];
  return *this;
}

SufficientStats::SufficientStats(const StateSpace& space, const Graph& graph) {
  nodes.reserve(space.num_nodes());
  for (int i = 0; i < space.num_nodes(); ++i) {
    const auto& parents = graph.parents(i);
    std::vector<int> pcards;
    pcards.reserve(parents.size());
    for (int p : parents) pcards.push_back(space.cardinality(p));
    nodes.emplace_back(i, parents, std::move(pcards), space.cardinality(i));
  }
}

SufficientStats& SufficientStats::operator+=(const SufficientStats& other) {
  if (other.nodes.size() != nodes.size()) {
    throw InvalidModelError("cannot merge statistics over different graphs");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] += other.nodes[i];
  return *this;
}

namespace {

std::size_t config_of(const NodeStats& ns, const std::vector<int>& state) {
  std::size_t idx = 0;
  std::size_t stride = 1;
  for (std::size_t k = 0; k < ns.parents.size(); ++k) {
    idx += stride * static_cast<std::size_t>(state[ns.parents[k]]);
    stride *= static_cast<std::size_t>(ns.parent_cards[k]);
  }
  return idx;
}

}  // namespace

void accumulate_statistics(SufficientStats& stats, const Trajectory& traj,
                           const StateSpace& space) {
  const int n = space.num_nodes();
  if (static_cast<int>(traj.initial.size()) != n) {
    throw FormatError("trajectory node count mismatch");
  }
  traj.validate();
  std::vector<int> state = traj.initial;
  double now = 0.0;
  auto add_dwell = [&](double until) {
    const double dt = until - now;
    for (auto& ns : stats.nodes) {
      ns.T(config_of(ns, state), state[ns.node]) += dt;
    }
  };
  for (const auto& e : traj.events) {
    add_dwell(e.time);
    now = e.time;
    auto& ns = stats.nodes[e.node];
    ns.M(config_of(ns, state), state[e.node], e.new_state) += 1.0;
    state[e.node] = e.new_state;
  }
  add_dwell(traj.t_end);
}

SufficientStats count_statistics(const Trajectory& traj, const Graph& graph,
                                 const StateSpace& space) {
  SufficientStats stats(space, graph);
  accumulate_statistics(stats, traj, space);
  return stats;
}

NodeStats marginalize_stats(const NodeStats& stats,
                            const std::vector<int>& subset) {
  // Positions of the subset inside the declared parent list.
  std::vector<std::size_t> pos;
  std::vector<int> sub_cards;
  pos.reserve(subset.size());
  for (int p : subset) {
    const auto it = std::find(stats.parents.begin(), stats.parents.end(), p);
    if (it == stats.parents.end()) {
      throw InvalidModelError("subset member " + std::to_string(p) +
                              " is not a declared parent of node " +
                              std::to_string(stats.node));
    }
    pos.push_back(static_cast<std::size_t>(it - stats.parents.begin()));
    sub_cards.push_back(stats.parent_cards[pos.back()]);
  }
  NodeStats out(stats.node, subset, sub_cards, stats.card);
  std::vector<int> digits(stats.parents.size());
  for (std::size_t u = 0; u < stats.nconfigs; ++u) {
    mixed_radix_decode(u, stats.parent_cards, digits);
    std::size_t su = 0;
    std::size_t stride = 1;
    for (std::size_t k = 0; k < pos.size(); ++k) {
      su += stride * static_cast<std::size_t>(digits[pos[k]]);
      stride *= static_cast<std::size_t>(sub_cards[k]);
    }
    for (int x = 0; x < stats.card; ++x) {
      out.T(su, x) += stats.T(u, x);
      for (int y = 0; y < stats.card; ++y) {
        if (y != x) out.M(su, x, y) += stats.M(u, x, y);
      }
    }
  }
  return out;
}

}  // namespace ctbn
