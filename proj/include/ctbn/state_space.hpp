#ifndef CTBN_STATE_SPACE_HPP
#define CTBN_STATE_SPACE_HPP

#include <vector>

namespace ctbn {

// Factorized state space: per-node cardinalities plus optional real-valued
// state labels. Labels default to the state index (0, 1, ...); spin systems
// relabel binary states as {-1, +1}. Observation models and spin dynamics
// operate on labels, everything else on indices.
class StateSpace {
 public:
  explicit StateSpace(std::vector<int> cardinalities);

  // n binary nodes labelled {-1, +1}.
  static StateSpace binary_spin(int n);

  int num_nodes() const { return static_cast<int>(cards_.size()); }
  int cardinality(int node) const { return cards_[node]; }
  const std::vector<int>& cardinalities() const { return cards_; }

  double label(int node, int state) const { return labels_[node][state]; }
  const std::vector<double>& labels(int node) const { return labels_[node]; }
  void set_labels(int node, std::vector<double> labels);

  bool operator==(const StateSpace&) const = default;

 private:
  std::vector<int> cards_;
  std::vector<std::vector<double>> labels_;
};

}  // namespace ctbn

#endif
