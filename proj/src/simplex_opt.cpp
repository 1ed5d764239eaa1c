#include "ctbn/simplex_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctbn/errors.hpp"
#include "ctbn/rng.hpp"

namespace ctbn {

namespace {

constexpr double kArmijoSigma = 1e-4;
constexpr int kMaxHalvings = 40;
constexpr double kCoordFloor = 1e-300;

void normalize(std::vector<double>& v) {
  double sum = 0.0;
  for (double& x : v) {
    x = std::max(x, kCoordFloor);
    sum += x;
  }
  for (double& x : v) x /= sum;
}

std::vector<double> dirichlet1(int d, Rng& rng) {
  std::vector<double> v(d);
  for (double& x : v) x = rng.exponential(1.0);
  normalize(v);
  return v;
}

struct RestartOutcome {
  std::vector<double> point;
  double value;
  bool converged;
  long long evals;
  bool line_search_ok;
};

RestartOutcome run_restart(const SimplexProblem& p, std::vector<double> pi) {
  normalize(pi);
  double f = p.objective(pi);
  long long evals = 1;
  bool converged = false;
  bool any_step = false;
  std::vector<double> candidate(pi.size());

  for (int it = 0; it < p.max_iterations; ++it) {
    const auto g = p.gradient(pi);
    bool accepted = false;
    double eta = 1.0;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      // Multiplicative step, recentered so the largest exponent is 0.
      double wmax = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < pi.size(); ++k) {
        wmax = std::max(wmax, eta * g[k]);
      }
      for (std::size_t k = 0; k < pi.size(); ++k) {
        candidate[k] = pi[k] * std::exp(eta * g[k] - wmax);
      }
      normalize(candidate);
      const double f_new = p.objective(candidate);
      ++evals;
      double dir = 0.0;
      for (std::size_t k = 0; k < pi.size(); ++k) {
        dir += g[k] * (candidate[k] - pi[k]);
      }
      if (f_new >= f + kArmijoSigma * std::max(dir, 0.0) && f_new >= f) {
        double step = 0.0;
        for (std::size_t k = 0; k < pi.size(); ++k) {
          step += std::abs(candidate[k] - pi[k]);
        }
        pi.swap(candidate);
        f = f_new;
        accepted = true;
        any_step = true;
        if (step < p.tol) converged = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) {
      // No usable step; stationary if we got anywhere at all.
      converged = any_step;
      break;
    }
    if (converged) break;
  }
  return {std::move(pi), f, converged, evals, any_step};
}

}  // namespace

SimplexResult maximize_on_simplex(const SimplexProblem& p) {
  if (p.dimension < 1) throw InvalidModelError("simplex dimension >= 1");
  if (p.tol <= 0.0) throw InvalidModelError("tolerance must be > 0");
  Rng rng(p.seed);

  // Initial points are drawn up front so the schedule is deterministic.
  std::vector<std::vector<double>> starts;
  starts.reserve(p.restarts);
  if (p.initial.has_value()) {
    starts.push_back(*p.initial);
  } else {
    starts.emplace_back(p.dimension, 1.0 / p.dimension);
  }
  while (static_cast<int>(starts.size()) < std::max(p.restarts, 1)) {
    starts.push_back(dirichlet1(p.dimension, rng));
  }

  SimplexResult best;
  bool any_line_search_ok = false;
  for (std::size_t r = 0; r < starts.size(); ++r) {
    auto outcome = run_restart(p, std::move(starts[r]));
    best.objective_evals += outcome.evals;
    any_line_search_ok = any_line_search_ok || outcome.line_search_ok;
    if (best.best_restart < 0 || outcome.value > best.value) {
      best.value = outcome.value;
      best.point = std::move(outcome.point);
      best.best_restart = static_cast<int>(r);
      best.converged = outcome.converged;
    }
  }
  best.line_search_failed_everywhere = !any_line_search_ok;
  return best;
}

}  // namespace ctbn
