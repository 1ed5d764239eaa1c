#include "ctbn/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ctbn/errors.hpp"

namespace ctbn {

RocPrResult roc_pr(const std::vector<double>& scores,
                   const std::vector<int>& labels) {
  const std::size_t n = scores.size();
  double positives = 0.0, negatives = 0.0;
  for (int l : labels) (l != 0 ? positives : negatives) += 1.0;
  if (positives == 0.0 || negatives == 0.0) {
    throw DegenerateMetricError(
        "ROC/PR need at least one positive and one negative edge");
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocPrResult out;
  out.roc_curve.emplace_back(0.0, 0.0);
  double tp = 0.0, fp = 0.0;
  double prev_recall = 0.0;
  std::size_t i = 0;
  while (i < n) {
    // Process ties as one threshold group.
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] != 0) {
        tp += 1.0;
      } else {
        fp += 1.0;
      }
    }
    const double tpr = tp / positives;
    const double fpr = fp / negatives;
    out.roc_curve.emplace_back(fpr, tpr);
    const double precision = tp / (tp + fp);
    out.pr_curve.emplace_back(tpr, precision);
    out.aupr += (tpr - prev_recall) * precision;
    prev_recall = tpr;
    i = j;
  }
  for (std::size_t k = 1; k < out.roc_curve.size(); ++k) {
    const auto& [fpr0, tpr0] = out.roc_curve[k - 1];
    const auto& [fpr1, tpr1] = out.roc_curve[k];
    out.auroc += (fpr1 - fpr0) * 0.5 * (tpr0 + tpr1);
  }
  return out;
}

RocPrResult roc_pr(const std::vector<std::vector<double>>& scores,
                   const Graph& truth) {
  const int n = truth.num_nodes();
  std::vector<double> flat;
  std::vector<int> labels;
  flat.reserve(n * (n - 1));
  labels.reserve(n * (n - 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      flat.push_back(scores[i][j]);
      labels.push_back(truth.has_edge(i, j) ? 1 : 0);
    }
  }
  return roc_pr(flat, labels);
}

int hamming_distance(const Graph& a, const Graph& b) {
  if (a.num_nodes() != b.num_nodes()) {
    throw InvalidModelError("hamming distance needs a shared node universe");
  }
  int d = 0;
  for (int i = 0; i < a.num_nodes(); ++i) {
    for (int j = 0; j < a.num_nodes(); ++j) {
      if (i == j) continue;
      if (a.has_edge(i, j) != b.has_edge(i, j)) ++d;
    }
  }
  return d;
}

}  // namespace ctbn
