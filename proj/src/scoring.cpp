#include "ctbn/scoring.hpp"

#include <cmath>
#include <limits>

#include "ctbn/numerics.hpp"

namespace ctbn {

double complete_log_likelihood(const SufficientStats& stats,
                               const CtbnModel& model) {
  double ll = 0.0;
  for (const auto& ns : stats.nodes) {
    const auto& cim = model.cim(ns.node);
    for (std::size_t u = 0; u < ns.nconfigs; ++u) {
      for (int x = 0; x < ns.card; ++x) {
        const double t = ns.T(u, x);
        for (int y = 0; y < ns.card; ++y) {
          if (y == x) continue;
          const double r = cim.rate(u, x, y);
          const double m = ns.M(u, x, y);
          if (m > 0.0) {
            if (r <= 0.0) return -std::numeric_limits<double>::infinity();
            ll += m * std::log(r);
          }
          ll -= t * r;
        }
      }
    }
  }
  return ll;
}

double node_marginal_score(const NodeStats& slice, double alpha, double beta) {
  double score = 0.0;
  for (std::size_t u = 0; u < slice.nconfigs; ++u) {
    for (int x = 0; x < slice.card; ++x) {
      const double lbeta = std::log(slice.T(u, x) + beta);
      for (int y = 0; y < slice.card; ++y) {
        if (y == x) continue;
        const double abar = slice.M(u, x, y) + alpha;
        score += std::lgamma(abar) - abar * lbeta;
      }
    }
  }
  return score;
}

double node_marginal_score_normalizer(const NodeStats& slice, double alpha,
                                      double beta) {
  const double entries = static_cast<double>(slice.nconfigs) * slice.card *
                         (slice.card - 1);
  return entries * (alpha * std::log(beta) - std::lgamma(alpha));
}

double exact_marginal_score(const SufficientStats& stats,
                            const GammaPrior& prior) {
  prior.validate();
  double score = 0.0;
  for (const auto& ns : stats.nodes) {
    score += node_marginal_score(ns, prior.alpha_for(ns.node),
                                 prior.beta_for(ns.node));
  }
  return score;
}

NodeMixtureScorer::NodeMixtureScorer(std::vector<NodeStats> slices,
                                     double alpha, double beta, double c)
    : slices_(std::move(slices)), alpha_(alpha), beta_(beta), c_(c) {}

NodeMixtureScorer::NodeMixtureScorer(
    const NodeStats& overcomplete,
    const std::vector<std::vector<int>>& subsets, double alpha, double beta,
    double c)
    : alpha_(alpha), beta_(beta), c_(c) {
  slices_.reserve(subsets.size());
  for (const auto& m : subsets) {
    slices_.push_back(marginalize_stats(overcomplete, m));
  }
}

MixtureScore NodeMixtureScorer::score(std::span<const double> pi) const {
  MixtureScore out;
  for (std::size_t k = 0; k < slices_.size(); ++k) {
    const double w = pi[k];
    if (w > 0.0) {
      const auto& s = slices_[k];
      for (std::size_t u = 0; u < s.nconfigs; ++u) {
        for (int x = 0; x < s.card; ++x) {
          const double lbeta = std::log(w * s.T(u, x) + beta_);
          for (int y = 0; y < s.card; ++y) {
            if (y == x) continue;
            const double abar = w * s.M(u, x, y) + alpha_;
            out.gamma_part += std::lgamma(abar) - abar * lbeta;
          }
        }
      }
      out.normalizer += node_marginal_score_normalizer(s, alpha_, beta_);
    }
    if (w < kPiFloor) out.clamped = true;
    out.dirichlet_part += (c_ - 1.0) * std::log(std::max(w, kPiFloor));
  }
  out.total = out.gamma_part + out.dirichlet_part;
  return out;
}

MixtureScore NodeMixtureScorer::score_stirling(
    std::span<const double> pi) const {
  MixtureScore out;
  for (std::size_t k = 0; k < slices_.size(); ++k) {
    const double w = pi[k];
    if (w > 0.0) {
      const auto& s = slices_[k];
      for (std::size_t u = 0; u < s.nconfigs; ++u) {
        for (int x = 0; x < s.card; ++x) {
          const double bbar = w * s.T(u, x) + beta_;
          for (int y = 0; y < s.card; ++y) {
            if (y == x) continue;
            const double abar = w * s.M(u, x, y) + alpha_;
            out.gamma_part += abar * (std::log(abar / bbar) - 1.0);
          }
        }
      }
      out.normalizer += node_marginal_score_normalizer(s, alpha_, beta_);
    }
    if (w < kPiFloor) out.clamped = true;
    out.dirichlet_part += (c_ - 1.0) * std::log(std::max(w, kPiFloor));
  }
  out.total = out.gamma_part + out.dirichlet_part;
  return out;
}

std::vector<double> NodeMixtureScorer::gradient(std::span<const double> pi,
                                                bool* clamped) const {
  std::vector<double> grad(slices_.size(), 0.0);
  bool any_clamped = false;
  for (std::size_t k = 0; k < slices_.size(); ++k) {
    const double w = pi[k];
    const auto& s = slices_[k];
    double g = 0.0;
    for (std::size_t u = 0; u < s.nconfigs; ++u) {
      for (int x = 0; x < s.card; ++x) {
        const double t = s.T(u, x);
        const double bbar = w * t + beta_;
        const double lbeta = std::log(bbar);
        for (int y = 0; y < s.card; ++y) {
          if (y == x) continue;
          const double m = s.M(u, x, y);
          const double abar = w * m + alpha_;
          g += m * (digamma(abar) - lbeta) - abar * t / bbar;
        }
      }
    }
    if (w >= kPiFloor) {
      g += (c_ - 1.0) / w;
    } else {
      any_clamped = true;  // prior term is constant below the floor
    }
    grad[k] = g;
  }
  if (clamped != nullptr) *clamped = any_clamped;
  return grad;
}

namespace {

NodeMixtureScorer make_scorer(const SufficientStats& stats,
                              const MixtureWeights& pi, int node,
                              const GammaPrior& gprior,
                              const DirichletPrior& dprior) {
  return NodeMixtureScorer(stats.nodes[node], pi.nodes[node].subsets,
                           gprior.alpha_for(node), gprior.beta_for(node),
                           dprior.c_for(node));
}

}  // namespace

MixtureScore mixture_lower_bound(const SufficientStats& stats,
                                 const MixtureWeights& pi,
                                 const GammaPrior& gprior,
                                 const DirichletPrior& dprior) {
  gprior.validate();
  MixtureScore total;
  for (int i = 0; i < pi.num_nodes(); ++i) {
    const auto part =
        make_scorer(stats, pi, i, gprior, dprior).score(pi.nodes[i].weights);
    total.total += part.total;
    total.gamma_part += part.gamma_part;
    total.dirichlet_part += part.dirichlet_part;
    total.normalizer += part.normalizer;
    total.clamped = total.clamped || part.clamped;
  }
  return total;
}

MixtureScore mixture_lower_bound_stirling(const SufficientStats& stats,
                                          const MixtureWeights& pi,
                                          const GammaPrior& gprior,
                                          const DirichletPrior& dprior) {
  gprior.validate();
  MixtureScore total;
  for (int i = 0; i < pi.num_nodes(); ++i) {
    const auto part = make_scorer(stats, pi, i, gprior, dprior)
                          .score_stirling(pi.nodes[i].weights);
    total.total += part.total;
    total.gamma_part += part.gamma_part;
    total.dirichlet_part += part.dirichlet_part;
    total.normalizer += part.normalizer;
    total.clamped = total.clamped || part.clamped;
  }
  return total;
}

std::vector<double> mixture_gradient(const SufficientStats& stats,
                                     const MixtureWeights& pi,
                                     const GammaPrior& gprior,
                                     const DirichletPrior& dprior, int node) {
  return make_scorer(stats, pi, node, gprior, dprior)
      .gradient(pi.nodes[node].weights);
}

}  // namespace ctbn
