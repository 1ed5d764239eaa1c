#include "ctbn/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctbn/errors.hpp"

namespace ctbn {

std::vector<int> Trajectory::state_after(std::size_t k) const {
  std::vector<int> s = initial;
  for (std::size_t i = 0; i < k && i < events.size(); ++i) {
    s[events[i].node] = events[i].new_state;
  }
  return s;
}

std::vector<int> Trajectory::state_at(double t) const {
  std::vector<int> s = initial;
  for (const auto& e : events) {
    if (e.time > t) break;
    s[e.node] = e.new_state;
  }
  return s;
}

void Trajectory::validate() const {
  double prev = 0.0;
  std::vector<int> state = initial;
  for (const auto& e : events) {
    if (e.time <= prev) throw FormatError("event times must strictly increase");
    if (e.time > t_end) throw FormatError("event beyond horizon");
    if (e.node < 0 || e.node >= static_cast<int>(initial.size())) {
      throw FormatError("event references unknown node " +
                        std::to_string(e.node));
    }
    if (state[e.node] == e.new_state) {
      throw FormatError("event does not change the node state");
    }
    state[e.node] = e.new_state;
    prev = e.time;
  }
}

NoiseModel NoiseModel::gaussian(double variance) {
  if (variance <= 0.0) throw InvalidModelError("Gaussian variance must be > 0");
  NoiseModel m;
  m.kind = Kind::Gaussian;
  m.variance = variance;
  return m;
}

NoiseModel NoiseModel::discrete_confusion(
    std::vector<std::vector<std::vector<double>>> matrices) {
  NoiseModel m;
  m.kind = Kind::DiscreteConfusion;
  m.confusion = std::move(matrices);
  return m;
}

NoiseModel NoiseModel::erf_basal(std::vector<double> mu,
                                 std::vector<double> sigma) {
  NoiseModel m;
  m.kind = Kind::ErfBasal;
  m.erf_mu = std::move(mu);
  m.erf_sigma = std::move(sigma);
  return m;
}

std::pair<double, double> irma_observation_likelihood(double y, double mu_b,
                                                      double sigma_b) {
  if (sigma_b <= 0.0) throw InvalidModelError("sigma_b must be > 0");
  const double e = std::erf((y - mu_b) / sigma_b);
  const auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
  return {clamp01(1.0 - e), clamp01(e)};
}

std::vector<double> NoiseModel::likelihood(const StateSpace& space, int node,
                                           std::optional<double> y) const {
  const int card = space.cardinality(node);
  std::vector<double> lik(card, 1.0);
  if (!y.has_value()) return lik;
  switch (kind) {
    case Kind::Gaussian: {
      for (int x = 0; x < card; ++x) {
        const double d = *y - space.label(node, x);
        lik[x] = std::exp(-0.5 * d * d / variance) /
                 std::sqrt(2.0 * M_PI * variance);
      }
      break;
    }
    case Kind::DiscreteConfusion: {
      const auto symbol = static_cast<std::size_t>(std::lround(*y));
      const auto& mat = confusion[node];
      for (int x = 0; x < card; ++x) {
        if (symbol >= mat[x].size()) {
          throw FormatError("observed symbol out of range");
        }
        lik[x] = mat[x][symbol];
      }
      break;
    }
    case Kind::ErfBasal: {
      if (card != 2) {
        throw InvalidModelError("erf-basal noise is defined for binary nodes");
      }
      const auto [p1, p0] =
          irma_observation_likelihood(*y, erf_mu[node], erf_sigma[node]);
      lik[0] = p0;
      lik[1] = p1;
      break;
    }
  }
  return lik;
}

void NoiseModel::validate(const StateSpace& space) const {
  const int n = space.num_nodes();
  switch (kind) {
    case Kind::Gaussian:
      if (variance <= 0.0) throw InvalidModelError("variance must be > 0");
      break;
    case Kind::DiscreteConfusion: {
      if (static_cast<int>(confusion.size()) != n) {
        throw InvalidModelError("confusion matrices: one per node required");
      }
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>(confusion[i].size()) != space.cardinality(i)) {
          throw InvalidModelError("confusion matrix row count mismatch");
        }
        for (const auto& row : confusion[i]) {
          double sum = 0.0;
          for (double p : row) {
            if (p < 0.0) throw InvalidModelError("negative confusion entry");
            sum += p;
          }
          if (std::abs(sum - 1.0) > 1e-9) {
            throw InvalidModelError("confusion rows must sum to 1");
          }
        }
      }
      break;
    }
    case Kind::ErfBasal:
      if (static_cast<int>(erf_mu.size()) != n ||
          static_cast<int>(erf_sigma.size()) != n) {
        throw InvalidModelError("erf-basal parameters: one pair per node");
      }
      for (double s : erf_sigma) {
        if (s <= 0.0) throw InvalidModelError("erf-basal sigma must be > 0");
      }
      break;
  }
}

void ObservationSet::validate() const {
  double prev = -1.0;
  for (const auto& row : rows) {
    if (row.time < 0.0 || row.time > t_end) {
      throw FormatError("observation time outside [0, t_end]");
    }
    if (row.time < prev) throw FormatError("observations must be sorted");
    prev = row.time;
  }
}

}  // namespace ctbn
