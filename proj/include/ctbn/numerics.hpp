#ifndef CTBN_NUMERICS_HPP
#define CTBN_NUMERICS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ctbn {

// Digamma via ascending recurrence plus the asymptotic Bernoulli series.
// Relative accuracy ~1e-14 for x > 0.
double digamma(double x);

// log(sum(exp(v))) without overflow.
double log_sum_exp(std::span<const double> v);

// Mixed-radix index of `digits` under `cards`; digit 0 is least significant.
inline std::size_t mixed_radix_index(std::span<const int> digits,
                                     std::span<const int> cards) {
  std::size_t idx = 0;
  std::size_t stride = 1;
  for (std::size_t k = 0; k < cards.size(); ++k) {
    idx += stride * static_cast<std::size_t>(digits[k]);
    stride *= static_cast<std::size_t>(cards[k]);
  }
  return idx;
}

inline void mixed_radix_decode(std::size_t index, std::span<const int> cards,
                               std::span<int> digits) {
  for (std::size_t k = 0; k < cards.size(); ++k) {
    const auto c = static_cast<std::size_t>(cards[k]);
    digits[k] = static_cast<int>(index % c);
    index /= c;
  }
}

inline std::size_t product_of(std::span<const int> cards) {
  std::size_t p = 1;
  for (int c : cards) p *= static_cast<std::size_t>(c);
  return p;
}

// Median of an unsorted sample (copies; average of middle pair for even n).
double median(std::vector<double> v);

// p-th percentile (linear interpolation), p in [0,100].
double percentile(std::vector<double> v, double p);

// Spearman rank correlation; average ranks on ties.
double spearman(std::span<const double> a, std::span<const double> b);

}  // namespace ctbn

#endif
