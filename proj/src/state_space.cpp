#include "ctbn/state_space.hpp"

#include <set>
#include <string>

#include "ctbn/errors.hpp"

namespace ctbn {

StateSpace::StateSpace(std::vector<int> cardinalities)
    : cards_(std::move(cardinalities)) {
  if (cards_.empty()) throw InvalidModelError("state space needs >= 1 node");
  labels_.reserve(cards_.size());
  for (std::size_t i = 0; i < cards_.size(); ++i) {
    if (cards_[i] < 2) {
      throw InvalidModelError("node " + std::to_string(i) +
                              " has cardinality < 2");
    }
    std::vector<double> def(cards_[i]);
    for (int s = 0; s < cards_[i]; ++s) def[s] = static_cast<double>(s);
    labels_.push_back(std::move(def));
  }
}

StateSpace StateSpace::binary_spin(int n) {
  StateSpace space(std::vector<int>(n, 2));
  for (int i = 0; i < n; ++i) space.set_labels(i, {-1.0, 1.0});
  return space;
}

void StateSpace::set_labels(int node, std::vector<double> labels) {
  if (static_cast<int>(labels.size()) != cards_[node]) {
    throw InvalidModelError("label count does not match cardinality");
  }
  std::set<double> unique(labels.begin(), labels.end());
  if (unique.size() != labels.size()) {
    throw InvalidModelError("state labels must be unique per node");
  }
  labels_[node] = std::move(labels);
}

}  // namespace ctbn
