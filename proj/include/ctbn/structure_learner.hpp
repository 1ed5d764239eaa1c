#ifndef CTBN_STRUCTURE_LEARNER_HPP
#define CTBN_STRUCTURE_LEARNER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ctbn/mixture.hpp"
#include "ctbn/parent_sets.hpp"
#include "ctbn/priors.hpp"
#include "ctbn/scoring.hpp"
#include "ctbn/stats.hpp"
#include "ctbn/variational.hpp"

namespace ctbn {

struct OptConfig {
  int restarts = 100;
  double tol = 1e-8;
  int max_iterations = 500;
  std::uint64_t seed = 0;
};

struct EmConfig {
  int max_iterations = 50;
  double objective_tol = 1e-4;  // relative change of the EM monitor
  // Heuristic init puts all mass on the largest candidate subsets;
  // the alternative draws a random simplex point per node.
  bool random_init = false;
  std::uint64_t init_seed = 0;
};

struct LearnResult {
  MixtureWeights pi;
  std::vector<std::vector<double>> edge_probabilities;
  Graph map_graph{1};
  std::vector<double> objective_trace;  // per EM iteration (incomplete data)
  int em_iterations = 0;
  bool converged = true;
  bool low_data = false;
  std::vector<std::string> flags;
  // Wall-clock split, seconds.
  double seconds_inference = 0.0;
  double seconds_optimization = 0.0;
};

// Candidate families for every node under a search mode.
std::vector<std::vector<std::vector<int>>> candidate_families(
    const SearchMode& mode, int n);

// The over-complete graph whose parent sets are the candidate unions.
Graph overcomplete_graph(const SearchMode& mode, int n);

// Complete-data structure learning: per-node maximization of the mixture
// score over the simplex.
LearnResult learn_complete(const SufficientStats& stats,
                           const StateSpace& space, const SearchMode& mode,
                           const GammaPrior& gprior,
                           const DirichletPrior& dprior,
                           const OptConfig& opt);

LearnResult learn_complete(const std::vector<Trajectory>& trajectories,
                           const StateSpace& space, const SearchMode& mode,
                           const GammaPrior& gprior,
                           const DirichletPrior& dprior,
                           const OptConfig& opt);

// Incomplete-data structure learning: alternate expected statistics under
// the current mixture with per-node weight maximization, keeping the
// best-objective iterate.
LearnResult learn_incomplete(const std::vector<ObservationSet>& obs_sets,
                             const StateSpace& space, const SearchMode& mode,
                             const GammaPrior& gprior,
                             const DirichletPrior& dprior,
                             EngineConfig engine_cfg, const OptConfig& opt,
                             const EmConfig& em);

// Exhaustive scoring baseline: every candidate subset scored by the exact
// marginal structure score (with its prior normalization restored so that
// subsets of different sizes are comparable), converted to edge
// probabilities through a per-node softmax over subsets.
LearnResult learn_complete_exact_score(const SufficientStats& stats,
                                       const StateSpace& space,
                                       const SearchMode& mode,
                                       const GammaPrior& gprior);

}  // namespace ctbn

#endif
