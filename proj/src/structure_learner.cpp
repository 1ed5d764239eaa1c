#include "ctbn/structure_learner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "ctbn/numerics.hpp"
#include "ctbn/rng.hpp"
#include "ctbn/simplex_opt.hpp"

namespace ctbn {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (a + 1) +
                    0xc2b2ae3d27d4eb4full * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// All mass on the largest candidate subsets: degenerate on the full
// candidate set when it is unique, uniform over the maximal-size subsets
// otherwise.
std::vector<double> heuristic_init(
    const std::vector<std::vector<int>>& family) {
  std::size_t max_size = 0;
  for (const auto& s : family) max_size = std::max(max_size, s.size());
  std::vector<double> w(family.size(), 0.0);
  int count = 0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (family[k].size() == max_size) ++count;
  }
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (family[k].size() == max_size) w[k] = 1.0 / count;
  }
  return w;
}

std::vector<double> random_simplex_init(std::size_t d, Rng& rng) {
  std::vector<double> w(d);
  double sum = 0.0;
  for (auto& x : w) {
    x = rng.uniform01_pos();
    sum += x;
  }
  for (auto& x : w) x /= sum;
  return w;
}

std::vector<double> floored_interior(std::vector<double> w) {
  double sum = 0.0;
  for (auto& x : w) {
    x = std::max(x, kPiFloor);
    sum += x;
  }
  for (auto& x : w) x /= sum;
  return w;
}

// Per-node simplex maximization of a mixture scorer.
SimplexResult maximize_node(const NodeMixtureScorer& scorer,
                            const std::vector<double>& start,
                            const OptConfig& opt, std::uint64_t seed) {
  SimplexProblem p;
  p.dimension = scorer.dimension();
  p.objective = [&scorer](std::span<const double> pi) {
    return scorer.score(pi).total;
  };
  p.gradient = [&scorer](std::span<const double> pi) {
    return scorer.gradient(pi);
  };
  p.restarts = opt.restarts;
  p.tol = opt.tol;
  p.max_iterations = opt.max_iterations;
  p.seed = seed;
  p.initial = floored_interior(start);
  return maximize_on_simplex(p);
}

}  // namespace

std::vector<std::vector<std::vector<int>>> candidate_families(
    const SearchMode& mode, int n) {
  std::vector<std::vector<std::vector<int>>> fams(n);
  for (int i = 0; i < n; ++i) fams[i] = enumerate_parent_sets(mode, n, i);
  return fams;
}

Graph overcomplete_graph(const SearchMode& mode, int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int p : overcomplete_parents(mode, n, i)) edges.emplace_back(p, i);
  }
  return Graph(n, edges);
}

LearnResult learn_complete(const SufficientStats& stats,
                           const StateSpace& space, const SearchMode& mode,
                           const GammaPrior& gprior,
                           const DirichletPrior& dprior,
                           const OptConfig& opt) {
  const int n = space.num_nodes();
  auto fams = candidate_families(mode, n);
  LearnResult result;
  result.pi.nodes.resize(n);

  const double t0 = now_seconds();
  for (int i = 0; i < n; ++i) {
    NodeMixtureScorer scorer(stats.nodes[i], fams[i], gprior.alpha_for(i),
                             gprior.beta_for(i), dprior.c_for(i));
    if (stats.nodes[i].total_transitions() == 0.0) {
      result.low_data = true;
      result.flags.push_back("node " + std::to_string(i) +
                             ": no transitions observed; prior-dominated");
    }
    auto sol = maximize_node(scorer, heuristic_init(fams[i]), opt,
                             mix_seed(opt.seed, i, 0));
    result.converged = result.converged && sol.converged;
    result.pi.nodes[i].subsets = fams[i];
    result.pi.nodes[i].weights = std::move(sol.point);
  }
  result.seconds_optimization = now_seconds() - t0;

  result.edge_probabilities = edge_probabilities(result.pi);
  result.map_graph = map_graph(result.pi);
  return result;
}

LearnResult learn_complete(const std::vector<Trajectory>& trajectories,
                           const StateSpace& space, const SearchMode& mode,
                           const GammaPrior& gprior,
                           const DirichletPrior& dprior,
                           const OptConfig& opt) {
  if (trajectories.empty()) throw InvalidModelError("no trajectories");
  const auto graph = overcomplete_graph(mode, space.num_nodes());
  SufficientStats stats(space, graph);
  for (const auto& traj : trajectories) {
    accumulate_statistics(stats, traj, space);
  }
  return learn_complete(stats, space, mode, gprior, dprior, opt);
}

LearnResult learn_incomplete(const std::vector<ObservationSet>& obs_sets,
                             const StateSpace& space, const SearchMode& mode,
                             const GammaPrior& gprior,
                             const DirichletPrior& dprior,
                             EngineConfig engine_cfg, const OptConfig& opt,
                             const EmConfig& em) {
  if (obs_sets.empty()) throw InvalidModelError("no observation sets");
  const int n = space.num_nodes();
  auto fams = candidate_families(mode, n);
  if (mode.kind == SearchMode::Kind::Greedy) {
    // The geometric mean would need the full over-complete parent marginal.
    engine_cfg.mode = EngineConfig::Mode::GreedyArithmetic;
  }

  MixtureWeights pi;
  pi.nodes.resize(n);
  Rng init_rng(em.init_seed);
  for (int i = 0; i < n; ++i) {
    pi.nodes[i].subsets = fams[i];
    pi.nodes[i].weights = em.random_init
                              ? random_simplex_init(fams[i].size(), init_rng)
                              : heuristic_init(fams[i]);
  }

  LearnResult result;
  double best_f = -std::numeric_limits<double>::infinity();
  MixtureWeights best_pi = pi;

  for (int iter = 0; iter < em.max_iterations; ++iter) {
    const double t_e = now_seconds();
    VariationalEngine engine(space, pi, gprior, dprior, engine_cfg);
    auto estep = engine.run(obs_sets);
    result.seconds_inference += now_seconds() - t_e;
    if (!estep.diagnostics.converged) {
      result.flags.push_back("iteration " + std::to_string(iter) +
                             ": inference stopped at the sweep budget");
    }

    const double t_m = now_seconds();
    MixtureWeights next = pi;
    for (int i = 0; i < n; ++i) {
      NodeMixtureScorer scorer(estep.estats.slices[i], gprior.alpha_for(i),
                               gprior.beta_for(i), dprior.c_for(i));
      auto sol = maximize_node(scorer, pi.nodes[i].weights, opt,
                               mix_seed(opt.seed, i, iter + 1));
      next.nodes[i].weights = std::move(sol.point);
    }
    result.seconds_optimization += now_seconds() - t_m;

    // Monitor: mixture objective at the new weights on the current
    // expected statistics, plus the path entropy of the E-step.
    double f = estep.entropy;
    for (int i = 0; i < n; ++i) {
      NodeMixtureScorer scorer(estep.estats.slices[i], gprior.alpha_for(i),
                               gprior.beta_for(i), dprior.c_for(i));
      f += scorer.score_stirling(next.nodes[i].weights).total;
    }
    result.objective_trace.push_back(f);
    ++result.em_iterations;
    pi = next;
    if (f > best_f) {
      best_f = f;
      best_pi = pi;
    }

    if (result.objective_trace.size() >= 2) {
      const double prev =
          result.objective_trace[result.objective_trace.size() - 2];
      const double rel = std::abs(f - prev) / std::max(1.0, std::abs(prev));
      if (rel < em.objective_tol) {
        result.converged = true;
        break;
      }
    }
    if (iter + 1 == em.max_iterations) {
      result.converged = false;
      result.flags.push_back("em-iteration-cap");
    }
  }

  result.pi = best_pi;
  result.edge_probabilities = edge_probabilities(result.pi);
  result.map_graph = map_graph(result.pi);
  return result;
}

LearnResult learn_complete_exact_score(const SufficientStats& stats,
                                       const StateSpace& space,
                                       const SearchMode& mode,
                                       const GammaPrior& gprior) {
  const int n = space.num_nodes();
  auto fams = candidate_families(mode, n);
  LearnResult result;
  result.pi.nodes.resize(n);
  const double t0 = now_seconds();
  for (int i = 0; i < n; ++i) {
    const double alpha = gprior.alpha_for(i);
    const double beta = gprior.beta_for(i);
    std::vector<double> scores;
    scores.reserve(fams[i].size());
    for (const auto& subset : fams[i]) {
      const auto slice = marginalize_stats(stats.nodes[i], subset);
      // Normalized marginal likelihood so that different table shapes are
      // on the same footing, uniform prior over candidate subsets.
      scores.push_back(node_marginal_score(slice, alpha, beta) +
                       node_marginal_score_normalizer(slice, alpha, beta));
    }
    const double z = log_sum_exp(scores);
    result.pi.nodes[i].subsets = fams[i];
    result.pi.nodes[i].weights.resize(scores.size());
    for (std::size_t k = 0; k < scores.size(); ++k) {
      result.pi.nodes[i].weights[k] = std::exp(scores[k] - z);
    }
  }
  result.seconds_optimization = now_seconds() - t0;
  result.edge_probabilities = edge_probabilities(result.pi);
  result.map_graph = map_graph(result.pi);
  return result;
}

}  // namespace ctbn
