#include "ctbn/joint.hpp"

#include <cmath>
#include <string>

#include "ctbn/errors.hpp"
#include "ctbn/numerics.hpp"

namespace ctbn {

JointGenerator::JointGenerator(std::vector<int> cards,
                               std::vector<double> rates)
    : cards_(std::move(cards)), dim_(product_of(cards_)),
      rates_(std::move(rates)) {
  if (rates_.size() != dim_ * dim_) {
    throw InvalidModelError("joint generator size mismatch");
  }
}

std::size_t JointGenerator::state_index(
    const std::vector<int>& per_node) const {
  return mixed_radix_index(per_node, cards_);
}

std::vector<int> JointGenerator::decode_state(std::size_t index) const {
  std::vector<int> digits(cards_.size());
  mixed_radix_decode(index, cards_, digits);
  return digits;
}

JointGenerator amalgamate(const CtbnModel& model, std::size_t max_states) {
  const auto& cards = model.space().cardinalities();
  std::size_t dim = 1;
  for (int c : cards) {
    dim *= static_cast<std::size_t>(c);
    if (dim > max_states) {
      throw OracleTooLargeError(
          "joint state space exceeds cap of " + std::to_string(max_states) +
          " states");
    }
  }
  std::vector<double> rates(dim * dim, 0.0);
  std::vector<int> state(cards.size());
  for (std::size_t s = 0; s < dim; ++s) {
    mixed_radix_decode(s, cards, state);
    double exit = 0.0;
    std::size_t stride = 1;
    for (int i = 0; i < model.num_nodes(); ++i) {
      const auto u = model.parent_config_of(i, state);
      const int x = state[i];
      for (int y = 0; y < cards[i]; ++y) {
        if (y == x) continue;
        const double r = model.cim(i).rate(u, x, y);
        const std::size_t s_to =
            s + stride * static_cast<std::size_t>(y - x);
        rates[s * dim + s_to] = r;
        exit += r;
      }
      stride *= static_cast<std::size_t>(cards[i]);
    }
    rates[s * dim + s] = -exit;
  }
  return JointGenerator(cards, std::move(rates));
}

std::vector<double> stationary_distribution(const JointGenerator& gen,
                                            double tol, int max_iter) {
  const std::size_t n = gen.dim();
  double max_exit = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    max_exit = std::max(max_exit, -gen.rate(s, s));
  }
  const double c = max_exit * 1.05 + 1e-12;
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (int it = 0; it < max_iter; ++it) {
    // next = pi (I + R/c)
    for (std::size_t j = 0; j < n; ++j) next[j] = pi[j];
    for (std::size_t s = 0; s < n; ++s) {
      const double w = pi[s] / c;
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) next[j] += w * gen.rate(s, j);
    }
    double diff = 0.0, total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      diff = std::max(diff, std::abs(next[j] - pi[j]));
      total += next[j];
    }
    for (std::size_t j = 0; j < n; ++j) pi[j] = next[j] / total;
    if (diff < tol) break;
  }
  return pi;
}

}  // namespace ctbn
