#ifndef CTBN_VARIATIONAL_HPP
#define CTBN_VARIATIONAL_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "ctbn/mixture.hpp"
#include "ctbn/priors.hpp"
#include "ctbn/stats.hpp"
#include "ctbn/time_grid.hpp"
#include "ctbn/trajectory.hpp"

namespace ctbn {

// Statistics marginalized to each candidate subset of each node's mixture.
// This is the shape every mixture score consumes and the shape the engine
// produces for incomplete data.
struct MarginalStats {
  std::vector<std::vector<NodeStats>> slices;  // [node][subset]

  static MarginalStats zeros(const StateSpace& space,
                             const MixtureWeights& pi);
  // Complete-data path: marginalize counted statistics per subset.
  static MarginalStats from_stats(const SufficientStats& stats,
                                  const MixtureWeights& pi);
  MarginalStats& operator+=(const MarginalStats& other);
};

// Posterior expected rate tables per node and candidate subset:
// rhat_m(x,y|u_m) = (pi_m E[M] + alpha) / (pi_m E[T] + beta).
struct NodePosteriorRates {
  int node = 0;
  int card = 0;
  std::vector<std::vector<int>> subsets;
  std::vector<std::vector<int>> subset_cards;
  std::vector<double> weights;
  std::vector<int> active;  // subset indices with weight above the floor
  std::vector<std::vector<double>> rhat;      // [m][(u*card+x)*card+y]
  std::vector<std::vector<double>> log_rhat;

  double rate(int m, std::size_t u, int x, int y) const {
    return rhat[m][(u * card + x) * card + y];
  }

  // Mixture means evaluated on a full configuration of the over-complete
  // parent list (digits aligned with `overcomplete`).
  double arithmetic(const std::vector<int>& overcomplete,
                    const std::vector<int>& digits, int x, int y) const;
  double geometric(const std::vector<int>& overcomplete,
                   const std::vector<int>& digits, int x, int y) const;
};

struct PosteriorRates {
  std::vector<NodePosteriorRates> nodes;
  // Upper bound on any node's total posterior exit rate; drives the grid.
  double max_exit_bound = 0.0;
};

PosteriorRates posterior_rates(const MarginalStats& estats,
                               const MixtureWeights& pi,
                               const GammaPrior& gprior,
                               double active_floor = 1e-12);

// Node marginals q, backward messages rho, forward messages alpha, and
// per-node evidence tables on a shared grid for one observation sequence.
// Messages are stored two-sided around evidence jumps: *_left holds the
// value valid on the segment ending at a grid point, *_right the value on
// the segment starting there. The marginal is the pointwise-normalized
// product q = alpha * rho, which keeps every coefficient bounded even for
// noise-free evidence.
struct VariationalState {
  TimeGrid grid;
  int num_nodes = 0;
  std::vector<int> cards;
  // [node][k*card + x]
  std::vector<std::vector<double>> q;
  std::vector<std::vector<double>> rho_left;
  std::vector<std::vector<double>> rho_right;
  std::vector<std::vector<double>> alpha_left;
  std::vector<std::vector<double>> alpha_right;
  // [node] -> sorted list of (grid index, likelihood over states)
  std::vector<std::vector<std::pair<std::size_t, std::vector<double>>>>
      evidence;

  double& q_at(int node, std::size_t k, int x) {
    return q[node][k * cards[node] + x];
  }
  double q_at(int node, std::size_t k, int x) const {
    return q[node][k * cards[node] + x];
  }
};

struct EngineConfig {
  enum class Mode { ExactGeometric, GreedyArithmetic };
  enum class Schedule { GaussSeidel, Jacobi };

  Mode mode = Mode::ExactGeometric;
  Schedule schedule = Schedule::GaussSeidel;
  double damping = 1.0;          // blending of new marginals into old
  int max_sweeps = 100;          // total sweep budget per fixed-point run
  int max_sweeps_per_stage = 40; // inner sweeps between stat refreshes
  int max_outer = 25;            // stat/rate refreshes
  double objective_tol = 1e-6;   // relative objective change
  double sweep_tol = 1e-8;       // max marginal change per sweep
  double dt_stability = 0.1;     // dt <= dt_stability / max exit rate
  double active_weight_floor = 1e-12;
  std::size_t exact_context_cap = 1u << 20;
  // Optional per-node initial distributions (empty = uniform).
  std::vector<std::vector<double>> initial_distribution;
};

struct EngineDiagnostics {
  int outer_iterations = 0;
  int total_sweeps = 0;
  double final_objective = 0.0;
  double final_delta_f = 0.0;
  bool converged = false;
  bool damped = false;
  std::vector<double> objective_trace;
};

struct EngineResult {
  MarginalStats estats;  // aggregated over all observation sequences
  double entropy = 0.0;  // summed path-measure entropy at the last refresh
  EngineDiagnostics diagnostics;
};

// Fixed-point solver for the coupled backward/forward system of the
// mixture dynamics. One engine instance is bound to a mixture, priors and
// config; runs own their states exclusively.
class VariationalEngine {
 public:
  VariationalEngine(StateSpace space, MixtureWeights pi, GammaPrior gprior,
                    DirichletPrior dprior, EngineConfig config);

  const StateSpace& space() const { return space_; }
  const MixtureWeights& mixture() const { return pi_; }
  const EngineConfig& config() const { return config_; }
  const std::vector<int>& overcomplete(int node) const {
    return contexts_[node].overcomplete;
  }

  // Grid and initialized state for one observation sequence under the
  // current rate bound (uniform q, unit rho, evidence tables attached).
  VariationalState make_state(const ObservationSet& obs,
                              const PosteriorRates& rates) const;

  // Update rho of one node by backward propagation with evidence jumps;
  // other nodes are read-only.
  void backward_sweep(int node, VariationalState& state,
                      const PosteriorRates& rates) const;
  // Update q of one node by forward propagation given its rho.
  void forward_sweep(int node, VariationalState& state,
                     const PosteriorRates& rates) const;

  // Child-coupling term Psi_i(x; t_k) evaluated from the current state.
  // `left_side` selects the rho values of the segment ending at k.
  std::vector<double> compute_psi(int node, const VariationalState& state,
                                  const PosteriorRates& rates, std::size_t k,
                                  bool left_side) const;

  // One full pass over nodes (backward + forward each); returns the
  // maximum marginal change. `eta` blends new marginals into old.
  double sweep(VariationalState& state, const PosteriorRates& rates,
               double eta) const;

  // Iterate sweeps to convergence with fixed rates (no stat refresh).
  int run_smoothing(VariationalState& state, const PosteriorRates& rates,
                    int max_sweeps = 0) const;

  // Expected statistics of one converged state (trapezoid on the grid).
  MarginalStats expected_statistics(const VariationalState& state,
                                    const PosteriorRates& rates) const;
  // Path-measure entropy term of one state.
  double entropy(const VariationalState& state,
                 const PosteriorRates& rates) const;

  // Convergence monitor: Stirling-form mixture objective on aggregated
  // expected statistics plus the entropy total.
  double variational_objective(const MarginalStats& aggregated,
                               double entropy_total) const;

  // Full fixed-point run over a set of observation sequences.
  EngineResult run(const std::vector<ObservationSet>& obs_sets) const;

 private:
  struct NodeContext {
    // Sorted union of the members of all ACTIVE subsets: the support the
    // dynamics actually run on. Inactive candidates only receive
    // statistics, assembled by factorizing their extra members out.
    std::vector<int> overcomplete;
    std::vector<int> oc_cards;
    std::size_t oc_size = 1;
    // Position of each active subset's members inside `overcomplete`
    // (empty for inactive subsets).
    std::vector<std::vector<std::size_t>> subset_pos;
    std::vector<int> children;  // j with this node in j's active support
    // Statistics-target decomposition of every subset: members inside the
    // dynamic context (position there + stride in the subset table) and
    // members outside it (node id + stride + cardinality).
    struct TargetPlan {
      std::vector<std::size_t> in_dyn_pos;
      std::vector<std::size_t> in_stride;
      std::vector<int> in_cards;
      std::size_t in_size = 1;
      std::vector<int> out_nodes;
      std::vector<std::size_t> out_stride;
      std::vector<int> out_cards;
      std::size_t out_size = 1;
    };
    std::vector<TargetPlan> targets;
  };

  struct Coefficients {
    // Off-diagonal transition means and total exit rates at a grid point,
    // plus the child coupling, for both segment sides where they differ.
    std::vector<double> trans;      // [x*card+y], mode-dependent mean
    std::vector<double> exit_arith; // [x]
    std::vector<double> psi_left;   // [x]
    std::vector<double> psi_right;  // [x]
  };

  void node_coefficients(int node, const VariationalState& state,
                         const PosteriorRates& rates,
                         std::vector<Coefficients>& out) const;
  void backward_core(int node, VariationalState& state,
                     const std::vector<Coefficients>& coef) const;
  void forward_core(int node, VariationalState& state,
                    const std::vector<Coefficients>& coef) const;
  // Backward then forward with coefficients computed once.
  void update_node(int node, VariationalState& state,
                   const PosteriorRates& rates) const;
  double transition_mean(int node, const VariationalState& state,
                         const PosteriorRates& rates, std::size_t k, int x,
                         int y, bool geometric) const;
  // Trapezoid accumulation of expected statistics and the entropy term of
  // one state into `accum` / `entropy_accum`.
  void integrate_path(const VariationalState& state,
                      const PosteriorRates& rates, MarginalStats& accum,
                      double& entropy_accum) const;

  StateSpace space_;
  MixtureWeights pi_;
  GammaPrior gprior_;
  DirichletPrior dprior_;
  EngineConfig config_;
  std::vector<NodeContext> contexts_;
};

}  // namespace ctbn

#endif
