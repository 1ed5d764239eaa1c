#ifndef CTBN_TRAJECTORY_HPP
#define CTBN_TRAJECTORY_HPP

#include <optional>
#include <utility>
#include <vector>

#include "ctbn/state_space.hpp"

namespace ctbn {

// One sample path: initial joint state plus an ordered list of single-node
// transition events on [0, t_end].
struct Trajectory {
  struct Event {
    double time;
    int node;
    int new_state;
  };

  std::vector<int> initial;
  std::vector<Event> events;
  double t_end = 0.0;
  // Set when sampling stopped in a joint state with no exit rate.
  bool absorbed = false;

  // Joint state immediately after the first `k` events.
  std::vector<int> state_after(std::size_t k) const;
  // Joint state at time t (right-continuous).
  std::vector<int> state_at(double t) const;

  void validate() const;
};

// Per-node observation noise.
struct NoiseModel {
  enum class Kind { Gaussian, DiscreteConfusion, ErfBasal };

  Kind kind = Kind::Gaussian;
  // Gaussian: variance of additive noise on the state label.
  double variance = 0.2;
  // DiscreteConfusion: per node, row-stochastic matrix p(y | x).
  std::vector<std::vector<std::vector<double>>> confusion;
  // ErfBasal: per-node basal mean/scale; binary nodes only.
  std::vector<double> erf_mu;
  std::vector<double> erf_sigma;

  static NoiseModel gaussian(double variance);
  static NoiseModel discrete_confusion(
      std::vector<std::vector<std::vector<double>>> matrices);
  static NoiseModel erf_basal(std::vector<double> mu,
                              std::vector<double> sigma);

  // Likelihood vector p(y | X_node = x) over states of `node`. A missing
  // value (nullopt) carries no evidence and yields all ones.
  std::vector<double> likelihood(const StateSpace& space, int node,
                                 std::optional<double> y) const;

  void validate(const StateSpace& space) const;
};

// Marginal observation likelihood of a binary node after integrating out a
// Gaussian basal level: returns (p(y|X=1), p(y|X=0)) =
// (1 - erf((y-mu)/sigma), erf((y-mu)/sigma)), each clamped to [0,1].
std::pair<double, double> irma_observation_likelihood(double y, double mu_b,
                                                      double sigma_b);

// Timestamped, possibly noisy measurements of all nodes. A NaN-free
// optional encodes per-node missingness.
struct ObservationSet {
  struct Row {
    double time;
    std::vector<std::optional<double>> values;
  };

  std::vector<Row> rows;  // sorted by time
  double t_end = 0.0;
  NoiseModel noise;

  void validate() const;
};

}  // namespace ctbn

#endif
