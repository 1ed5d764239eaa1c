#ifndef CTBN_SIMPLEX_OPT_HPP
#define CTBN_SIMPLEX_OPT_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ctbn {

// Maximization of a smooth objective over the probability simplex by
// exponentiated-gradient (mirror) ascent with Armijo backtracking and
// random restarts.
struct SimplexProblem {
  int dimension = 1;
  std::function<double(std::span<const double>)> objective;
  std::function<std::vector<double>(std::span<const double>)> gradient;
  int restarts = 100;
  double tol = 1e-8;        // L1 change between iterates
  int max_iterations = 500;
  std::uint64_t seed = 0;
  // Restart 0 starts here (projected to the interior); the remaining
  // restarts draw Dirichlet(1) points.
  std::optional<std::vector<double>> initial;
};

struct SimplexResult {
  std::vector<double> point;
  double value = 0.0;
  bool converged = false;   // at least one restart converged
  int best_restart = -1;
  long long objective_evals = 0;
  bool line_search_failed_everywhere = false;
};

SimplexResult maximize_on_simplex(const SimplexProblem& problem);

}  // namespace ctbn

#endif
