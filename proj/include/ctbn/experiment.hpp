#ifndef CTBN_EXPERIMENT_HPP
#define CTBN_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ctbn/structure_learner.hpp"

namespace ctbn {

// Seeded synthetic-experiment runner. Protocols:
//   complete    - spin networks with full sample paths; mixture learning
//                 against the exhaustive exact-score baseline
//   incomplete  - noisy subsampled observations; EM learning
//   prior-sweep - score profile over the mixture weight of a 2-node system
//                 for several concentration parameters
//   stability   - MAP-graph Hamming distance across nested subsamples
//   scaling     - wall-clock growth of greedy EM over system sizes
struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string protocol = "complete";
  std::string output_dir;  // empty = no files written
  int threads = 0;

  // System draw: random truncated-degree spin networks, or a fixed
  // ground-truth model file used for every replicate.
  int nodes = 5;
  int max_in_degree = 2;
  double gamma = 0.6;
  std::string model_file;

  // Data generation.
  std::vector<int> trajectory_counts = {10, 20, 50, 100};
  int transitions_per_trajectory = 10;
  int n_obs = 10;
  double noise_variance = 0.2;

  // Priors.
  GammaPrior gprior;
  DirichletPrior dprior;

  // Search.
  std::string search = "exhaustive";  // exhaustive | greedy
  int greedy_k = 2;

  int replicates = 30;
  EngineConfig engine;
  OptConfig opt;
  EmConfig em;

  // prior-sweep protocol.
  std::vector<double> sweep_c = {0.0, 0.9, 2.0};
  std::vector<int> sweep_trajectories = {10, 200};
  int profile_points = 41;

  // stability protocol.
  std::vector<int> stability_counts = {100, 200, 300, 400};

  // scaling protocol.
  std::vector<int> scaling_nodes = {5, 8, 10, 15};
  int scaling_trajectories = 50;

  void validate() const;
};

struct EdgeMetricsRow {
  int replicate = 0;
  int n_traj = 0;
  std::string mode;
  double auroc = 0.0;
  double aupr = 0.0;
  double runtime_s = 0.0;
  std::string flags;
};

struct ProfileRow {
  double c = 0.0;
  int n_traj = 0;
  double weight_on_parent = 0.0;
  double value = 0.0;  // profile normalized to max 0 per (c, n_traj)
};

struct StabilityRow {
  int replicate = 0;
  int n_traj = 0;
  int hamming = 0;
};

struct ScalingRow {
  int nodes = 0;
  double runtime_s = 0.0;
  double auroc = 0.0;
};

struct MetricsReport {
  std::vector<EdgeMetricsRow> edge_rows;
  std::vector<ProfileRow> profile_rows;
  std::vector<StabilityRow> stability_rows;
  std::vector<ScalingRow> scaling_rows;
  std::string summary_json;
  int failed_replicates = 0;
};

MetricsReport run_experiment(const ExperimentConfig& config);

ExperimentConfig experiment_config_from_json(const std::string& text);

}  // namespace ctbn

#endif
