#ifndef CTBN_JOINT_HPP
#define CTBN_JOINT_HPP

#include <cstddef>
#include <vector>

#include "ctbn/cim.hpp"

namespace ctbn {

// Dense generator of the amalgamated CTMC over the product state space.
// Joint states are mixed-radix indices over per-node states, node 0 least
// significant. Intended as a validation oracle for small systems, not as a
// learning path.
class JointGenerator {
 public:
  JointGenerator(std::vector<int> cards, std::vector<double> rates);

  std::size_t dim() const { return dim_; }
  const std::vector<int>& cardinalities() const { return cards_; }
  double rate(std::size_t s, std::size_t s_to) const {
    return rates_[s * dim_ + s_to];
  }
  const std::vector<double>& dense() const { return rates_; }

  std::size_t state_index(const std::vector<int>& per_node) const;
  std::vector<int> decode_state(std::size_t index) const;

 private:
  std::vector<int> cards_;
  std::size_t dim_;
  std::vector<double> rates_;
};

// Builds the joint generator. Throws OracleTooLargeError if the product
// space exceeds `max_states` (default 4096).
JointGenerator amalgamate(const CtbnModel& model,
                          std::size_t max_states = 4096);

// Stationary distribution by power iteration on I + R/c. Requires an
// irreducible chain to be meaningful.
std::vector<double> stationary_distribution(const JointGenerator& gen,
                                            double tol = 1e-13,
                                            int max_iter = 200000);

}  // namespace ctbn

#endif
