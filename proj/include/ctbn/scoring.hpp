#ifndef CTBN_SCORING_HPP
#define CTBN_SCORING_HPP

#include <span>
#include <vector>

#include "ctbn/cim.hpp"
#include "ctbn/mixture.hpp"
#include "ctbn/priors.hpp"
#include "ctbn/stats.hpp"

namespace ctbn {

// Weight floor for the Dirichlet term: below it, ln(pi) and 1/pi are
// evaluated at the floor and the prior gradient is zeroed. Keeps the
// objective finite for c < 1 while preserving the sparsity pressure.
inline constexpr double kPiFloor = 1e-8;

// Complete-data log likelihood sum_i sum_{x,x'!=x,u} [M ln R - T R].
// Returns -inf if a transition was counted at a zero rate.
double complete_log_likelihood(const SufficientStats& stats,
                               const CtbnModel& model);

// Marginal structure score of one node slice (rates integrated out under
// the gamma prior): sum over (u,x,x'!=x) of lnGamma(M+a) - (M+a) ln(T+b).
// Proportional form; per-entry prior constants are omitted, so values are
// comparable only for the same node, the same data, and the same table
// shape.
double node_marginal_score(const NodeStats& slice, double alpha, double beta);

// Per-entry constant restoring the full (normalized) marginal likelihood:
// add n_entries * (a ln b - lnGamma(a)) to the proportional score.
double node_marginal_score_normalizer(const NodeStats& slice, double alpha,
                                      double beta);

// Sum of proportional node scores over all nodes.
double exact_marginal_score(const SufficientStats& stats,
                            const GammaPrior& prior);

struct MixtureScore {
  double total = 0.0;        // gamma_part + dirichlet_part
  double gamma_part = 0.0;   // proportional per-entry form
  double dirichlet_part = 0.0;
  // Adding this to gamma_part gives the fully normalized likelihood
  // lower bound (used when comparing against an exact marginal).
  double normalizer = 0.0;
  bool clamped = false;  // some weight was below the floor
};

// Per-node mixture objective over a family of parent subsets with
// marginalized statistics cached per subset. Zero-weight components
// contribute nothing (their normalized marginal factor is 1), which makes
// the score at a degenerate mixture coincide with the exact structure score
// of the selected subset.
class NodeMixtureScorer {
 public:
  NodeMixtureScorer(std::vector<NodeStats> slices, double alpha, double beta,
                    double c);

  // Builds slices by marginalizing an over-complete table to each subset.
  NodeMixtureScorer(const NodeStats& overcomplete,
                    const std::vector<std::vector<int>>& subsets, double alpha,
                    double beta, double c);

  int dimension() const { return static_cast<int>(slices_.size()); }
  const std::vector<NodeStats>& slices() const { return slices_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double concentration() const { return c_; }

  MixtureScore score(std::span<const double> pi) const;
  // Stirling form of the gamma terms: sum of a_bar (ln(a_bar/b_bar) - 1).
  MixtureScore score_stirling(std::span<const double> pi) const;
  // d score / d pi(m); prior-gradient coordinates at floored weights are 0
  // and reported through `clamped` when provided.
  std::vector<double> gradient(std::span<const double> pi,
                               bool* clamped = nullptr) const;

 private:
  std::vector<NodeStats> slices_;
  double alpha_;
  double beta_;
  double c_;
};

// Whole-system wrappers (sum over nodes); `stats` must carry each node's
// over-complete context so that every candidate subset can be marginalized.
MixtureScore mixture_lower_bound(const SufficientStats& stats,
                                 const MixtureWeights& pi,
                                 const GammaPrior& gprior,
                                 const DirichletPrior& dprior);
MixtureScore mixture_lower_bound_stirling(const SufficientStats& stats,
                                          const MixtureWeights& pi,
                                          const GammaPrior& gprior,
                                          const DirichletPrior& dprior);
std::vector<double> mixture_gradient(const SufficientStats& stats,
                                     const MixtureWeights& pi,
                                     const GammaPrior& gprior,
                                     const DirichletPrior& dprior, int node);

}  // namespace ctbn

#endif
