#ifndef CTBN_PRIORS_HPP
#define CTBN_PRIORS_HPP

#include <vector>

#include "ctbn/errors.hpp"

namespace ctbn {

// Gamma prior over rates, broadcast scalars with optional per-node
// overrides. Defaults alpha=5, beta=10.
struct GammaPrior {
  double alpha = 5.0;
  double beta = 10.0;
  std::vector<double> alpha_by_node;  // empty = broadcast
  std::vector<double> beta_by_node;

  double alpha_for(int node) const {
    return alpha_by_node.empty() ? alpha : alpha_by_node[node];
  }
  double beta_for(int node) const {
    return beta_by_node.empty() ? beta : beta_by_node[node];
  }
  void validate() const {
    if (alpha <= 0.0 || beta <= 0.0) {
      throw InvalidModelError("gamma prior parameters must be positive");
    }
    for (double a : alpha_by_node) {
      if (a <= 0.0) throw InvalidModelError("gamma prior alpha must be > 0");
    }
    for (double b : beta_by_node) {
      if (b <= 0.0) throw InvalidModelError("gamma prior beta must be > 0");
    }
  }
};

// Dirichlet concentration over mixture weights; default c=0.9.
struct DirichletPrior {
  double c = 0.9;
  std::vector<double> c_by_node;

  double c_for(int node) const {
    return c_by_node.empty() ? c : c_by_node[node];
  }
};

}  // namespace ctbn

#endif
