#include "ctbn/mixture.hpp"

#include <algorithm>
#include <cmath>

#include "ctbn/errors.hpp"

namespace ctbn {

int NodeMixture::index_of(const std::vector<int>& subset) const {
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (subsets[i] == subset) return static_cast<int>(i);
  }
  return -1;
}

int NodeMixture::argmax() const {
  int best = 0;
  for (std::size_t i = 1; i < weights.size(); ++i) {
    if (weights[i] > weights[best]) best = static_cast<int>(i);
  }
  return best;
}

MixtureWeights MixtureWeights::uniform(
    const std::vector<std::vector<std::vector<int>>>& families) {
  MixtureWeights pi;
  pi.nodes.reserve(families.size());
  for (const auto& family : families) {
    NodeMixture nm;
    nm.subsets = family;
    nm.weights.assign(family.size(), 1.0 / static_cast<double>(family.size()));
    pi.nodes.push_back(std::move(nm));
  }
  return pi;
}

MixtureWeights MixtureWeights::degenerate(
    const std::vector<std::vector<std::vector<int>>>& families,
    const std::vector<int>& chosen) {
  MixtureWeights pi;
  pi.nodes.reserve(families.size());
  for (std::size_t i = 0; i < families.size(); ++i) {
    NodeMixture nm;
    nm.subsets = families[i];
    nm.weights.assign(families[i].size(), 0.0);
    nm.weights.at(chosen[i]) = 1.0;
    pi.nodes.push_back(std::move(nm));
  }
  return pi;
}

void MixtureWeights::validate(double tol) const {
  for (const auto& nm : nodes) {
    if (nm.subsets.size() != nm.weights.size() || nm.subsets.empty()) {
      throw InvalidModelError("mixture weights shape mismatch");
    }
    double sum = 0.0;
    for (double w : nm.weights) {
      if (w < 0.0) throw InvalidModelError("negative mixture weight");
      sum += w;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw InvalidModelError("mixture weights must sum to 1");
    }
  }
}

std::vector<std::vector<double>> edge_probabilities(const MixtureWeights& pi) {
  const int n = pi.num_nodes();
  std::vector<std::vector<double>> probs(n, std::vector<double>(n, 0.0));
  for (int j = 0; j < n; ++j) {
    const auto& nm = pi.nodes[j];
    for (std::size_t k = 0; k < nm.subsets.size(); ++k) {
      for (int i : nm.subsets[k]) probs[i][j] += nm.weights[k];
    }
  }
  for (int i = 0; i < n; ++i) probs[i][i] = 0.0;
  return probs;
}

Graph map_graph(const MixtureWeights& pi) {
  std::vector<std::pair<int, int>> edges;
  for (int j = 0; j < pi.num_nodes(); ++j) {
    const auto& nm = pi.nodes[j];
    for (int i : nm.subsets[nm.argmax()]) edges.emplace_back(i, j);
  }
  return Graph(pi.num_nodes(), edges);
}

}  // namespace ctbn
