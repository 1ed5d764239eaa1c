#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "acceptance/common.hpp"
#include "ctbn/experiment.hpp"
#include "ctbn/numerics.hpp"

namespace ctbn::acceptance {

namespace {

std::map<std::pair<std::string, int>, std::vector<double>> group_metric(
    const std::vector<EdgeMetricsRow>& rows, bool aupr) {
  std::map<std::pair<std::string, int>, std::vector<double>> out;
  for (const auto& r : rows) {
    out[{r.mode, r.n_traj}].push_back(aupr ? r.aupr : r.auroc);
  }
  return out;
}

// Criterion 6: complete-data recovery against the exact-score baseline.
CriterionResult complete_recovery(const Options& opt) {
  CriterionResult res{"6 complete-data recovery", false, "", 0.0};
  const double t0 = now_s();
  ExperimentConfig cfg;
  cfg.protocol = "complete";
  cfg.seed = 2024;
  cfg.nodes = 5;
  cfg.max_in_degree = 2;
  cfg.gamma = 0.6;
  cfg.replicates = 30;
  cfg.trajectory_counts = {10, 100};
  cfg.threads = opt.threads;
  auto report = run_experiment(cfg);

  auto auroc = group_metric(report.edge_rows, false);
  const double mix10 = median(auroc[{"mixture", 10}]);
  const double mix100 = median(auroc[{"mixture", 100}]);
  const double exact10 = median(auroc[{"exact-score", 10}]);
  const double exact100 = median(auroc[{"exact-score", 100}]);

  res.seconds = now_s() - t0;
  const bool high = mix100 >= 0.9;
  const bool close = std::abs(mix100 - exact100) <= 0.05;
  const bool rising = mix100 > mix10 && exact100 > exact10;
  res.pass = high && close && rising && report.failed_replicates == 0 &&
             res.seconds < 900.0;
  res.detail = cat("median AUROC mixture 10->100: ", mix10, " -> ", mix100,
                   "; exact-score: ", exact10, " -> ", exact100,
                   " (need mixture>=0.9, |diff|<=0.05, both rising)");
  return res;
}

// Criterion 7: incomplete-data recovery; exhaustive vs greedy K=4 and
// heuristic vs random initialization.
CriterionResult incomplete_recovery(const Options& opt) {
  CriterionResult res{"7 incomplete-data recovery", false, "", 0.0};
  const double t0 = now_s();
  const int replicates = opt.full ? 30 : 10;

  ExperimentConfig base;
  base.protocol = "incomplete";
  base.seed = 4096;
  base.nodes = 5;
  base.max_in_degree = 2;
  base.gamma = 0.6;
  base.replicates = replicates;
  base.trajectory_counts = {40};
  base.transitions_per_trajectory = 10;
  base.n_obs = 10;
  base.noise_variance = 0.2;
  base.threads = opt.threads;

  ExperimentConfig exhaustive = base;
  exhaustive.search = "exhaustive";

  ExperimentConfig greedy = base;
  greedy.search = "greedy";
  greedy.greedy_k = 4;

  ExperimentConfig random_init = base;
  random_init.search = "exhaustive";
  random_init.em.random_init = true;

  auto rep_ex = run_experiment(exhaustive);
  auto rep_gr = run_experiment(greedy);
  auto rep_ri = run_experiment(random_init);

  auto collect = [](const MetricsReport& r, bool aupr) {
    std::vector<double> v;
    for (const auto& row : r.edge_rows) {
      v.push_back(aupr ? row.aupr : row.auroc);
    }
    return v;
  };
  const double ex_auroc = median(collect(rep_ex, false));
  const double ex_aupr = median(collect(rep_ex, true));
  const double gr_auroc = median(collect(rep_gr, false));
  const double ri_auroc = median(collect(rep_ri, false));

  res.seconds = now_s() - t0;
  const bool ex_ok = ex_auroc >= 0.75 && ex_aupr >= 0.6;
  const bool greedy_ok = ex_auroc - gr_auroc <= 0.1;
  const bool init_ok = ex_auroc >= ri_auroc;
  const double budget = opt.full ? 4.0 * 3600.0 : 45.0 * 60.0;
  const int failures = rep_ex.failed_replicates + rep_gr.failed_replicates +
                       rep_ri.failed_replicates;
  res.pass =
      ex_ok && greedy_ok && init_ok && failures == 0 && res.seconds < budget;
  res.detail =
      cat("exhaustive AUROC ", ex_auroc, " AUPR ", ex_aupr, "; greedy-4 AUROC ",
          gr_auroc, "; random-init AUROC ", ri_auroc, " (", replicates,
          " replicates", opt.full ? "" : ", smoke variant", ")");
  return res;
}

// Criterion 8: greedy EM wall-clock growth across system sizes.
CriterionResult scalability(const Options& opt) {
  CriterionResult res{"8 scalability of greedy search", false, "", 0.0};
  const double t0 = now_s();
  ExperimentConfig cfg;
  cfg.protocol = "scaling";
  cfg.seed = 777;
  cfg.max_in_degree = 2;
  cfg.gamma = 0.6;
  cfg.greedy_k = 2;
  cfg.scaling_nodes = {5, 8, 10, 15};
  cfg.scaling_trajectories = 50;
  cfg.transitions_per_trajectory = 10;
  cfg.n_obs = 10;
  cfg.threads = opt.threads;
  auto report = run_experiment(cfg);

  res.seconds = now_s() - t0;
  if (report.scaling_rows.size() != cfg.scaling_nodes.size()) {
    res.detail = "scaling run failed for some sizes";
    return res;
  }
  // Least-squares slope in log-log coordinates.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double t15 = 0.0;
  for (const auto& row : report.scaling_rows) {
    const double x = std::log(static_cast<double>(row.nodes));
    const double y = std::log(std::max(row.runtime_s, 1e-6));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    if (row.nodes == 15) t15 = row.runtime_s;
  }
  const double n = static_cast<double>(report.scaling_rows.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  res.pass = slope < 3.0 && t15 < 1800.0;
  res.detail = cat("fitted runtime exponent ", slope, " over N in {5,8,10,15}",
                   "; 15-node run took ", t15, " s (cap 1800)");
  return res;
}

}  // namespace

std::vector<CriterionResult> run_learning_criteria(const Options& opt) {
  return {complete_recovery(opt), incomplete_recovery(opt), scalability(opt)};
}

}  // namespace ctbn::acceptance
