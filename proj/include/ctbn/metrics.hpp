#ifndef CTBN_METRICS_HPP
#define CTBN_METRICS_HPP

#include <utility>
#include <vector>

#include "ctbn/graph.hpp"

namespace ctbn {

struct RocPrResult {
  double auroc = 0.0;
  double aupr = 0.0;
  // (false positive rate, true positive rate) per threshold, descending.
  std::vector<std::pair<double, double>> roc_curve;
  // (recall, precision) per threshold, descending.
  std::vector<std::pair<double, double>> pr_curve;
};

// Edge classification metrics: scores[i][j] ranks the directed edge i->j
// against the ground truth; the diagonal is excluded. AUROC by trapezoid
// over the threshold sweep, AUPR by step-wise precision at each achieved
// recall level. Throws DegenerateMetricError when the truth has no
// positive or no negative edge.
RocPrResult roc_pr(const std::vector<std::vector<double>>& scores,
                   const Graph& truth);

// Flat score/label variant.
RocPrResult roc_pr(const std::vector<double>& scores,
                   const std::vector<int>& labels);

// Number of directed edges present in exactly one of the graphs.
int hamming_distance(const Graph& a, const Graph& b);

}  // namespace ctbn

#endif
