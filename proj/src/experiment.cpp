#include "ctbn/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ctbn/gillespie.hpp"
#include "ctbn/metrics.hpp"
#include "ctbn/numerics.hpp"
#include "ctbn/parallel.hpp"
#include "ctbn/serialize.hpp"

namespace ctbn {

using nlohmann::json;

namespace {

double wall_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::uint64_t mix64(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

SearchMode search_mode_of(const ExperimentConfig& cfg) {
  if (cfg.search == "exhaustive") return SearchMode::exhaustive();
  if (cfg.search == "greedy") return SearchMode::greedy(cfg.greedy_k);
  throw InvalidModelError("unknown search mode: " + cfg.search);
}

// Ground truth for one replicate: the configured model file, or a random
// truncated-degree spin network.
CtbnModel draw_truth(const ExperimentConfig& cfg, Rng& rng) {
  if (!cfg.model_file.empty()) return load_model(cfg.model_file);
  return build_glauber_model(random_graph(cfg.nodes, cfg.max_in_degree, rng),
                             cfg.gamma);
}

std::vector<Trajectory> simulate_batch(const CtbnModel& model, int count,
                                       int transitions, Rng& rng) {
  std::vector<Trajectory> out;
  out.reserve(count);
  for (int t = 0; t < count; ++t) {
    out.push_back(gillespie_sample(model, StopAfterTransitions{transitions},
                                   InitialUniform{}, rng));
  }
  return out;
}

struct ReplicateOutput {
  std::vector<EdgeMetricsRow> rows;
  std::vector<StabilityRow> stability;
  bool failed = false;
  std::string error;
};

// One complete-data replicate: nested trajectory prefixes, mixture and
// exact-score learners.
ReplicateOutput run_complete_replicate(const ExperimentConfig& cfg, int rep) {
  ReplicateOutput out;
  Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep));
  const auto model = draw_truth(cfg, rng);
  const auto& truth = model.graph();
  const int max_count =
      *std::max_element(cfg.trajectory_counts.begin(),
                        cfg.trajectory_counts.end());
  const auto trajectories = simulate_batch(
      model, max_count, cfg.transitions_per_trajectory, rng);
  const auto mode = search_mode_of(cfg);
  const auto graph = overcomplete_graph(mode, model.num_nodes());

  for (int count : cfg.trajectory_counts) {
    SufficientStats stats(model.space(), graph);
    for (int t = 0; t < count; ++t) {
      accumulate_statistics(stats, trajectories[t], model.space());
    }
    OptConfig opt = cfg.opt;
    opt.seed = mix64(cfg.seed, rep * 1000 + count);

    const double t0 = wall_seconds();
    auto mixture = learn_complete(stats, model.space(), mode, cfg.gprior,
                                  cfg.dprior, opt);
    const double t1 = wall_seconds();
    auto metrics = roc_pr(mixture.edge_probabilities, truth);
    out.rows.push_back({rep, count, "mixture", metrics.auroc, metrics.aupr,
                        t1 - t0,
                        mixture.converged ? "" : "opt-not-converged"});

    const double t2 = wall_seconds();
    auto exact =
        learn_complete_exact_score(stats, model.space(), mode, cfg.gprior);
    const double t3 = wall_seconds();
    auto exact_metrics = roc_pr(exact.edge_probabilities, truth);
    out.rows.push_back({rep, count, "exact-score", exact_metrics.auroc,
                        exact_metrics.aupr, t3 - t2, ""});
  }
  return out;
}

ReplicateOutput run_incomplete_replicate(const ExperimentConfig& cfg,
                                         int rep) {
  ReplicateOutput out;
  Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep));
  const auto model = draw_truth(cfg, rng);
  const auto& truth = model.graph();
  const int max_count =
      *std::max_element(cfg.trajectory_counts.begin(),
                        cfg.trajectory_counts.end());
  const auto trajectories = simulate_batch(
      model, max_count, cfg.transitions_per_trajectory, rng);
  std::vector<ObservationSet> all_obs;
  all_obs.reserve(trajectories.size());
  for (const auto& traj : trajectories) {
    all_obs.push_back(observe(traj, model.space(), cfg.n_obs,
                              NoiseModel::gaussian(cfg.noise_variance),
                              rng));
  }
  const auto mode = search_mode_of(cfg);
  const std::string label =
      cfg.search + (cfg.em.random_init ? "+random-init" : "");

  for (int count : cfg.trajectory_counts) {
    std::vector<ObservationSet> obs(all_obs.begin(),
                                    all_obs.begin() + count);
    OptConfig opt = cfg.opt;
    opt.seed = mix64(cfg.seed, rep * 1000 + count);
    EmConfig em = cfg.em;
    em.init_seed = mix64(cfg.seed, rep * 7919 + count);

    const double t0 = wall_seconds();
    auto result = learn_incomplete(obs, model.space(), mode, cfg.gprior,
                                   cfg.dprior, cfg.engine, opt, em);
    const double t1 = wall_seconds();
    auto metrics = roc_pr(result.edge_probabilities, truth);
    std::string flags;
    for (const auto& f : result.flags) {
      if (!flags.empty()) flags += ";";
      flags += f;
    }
    out.rows.push_back(
        {rep, count, label, metrics.auroc, metrics.aupr, t1 - t0, flags});
  }
  return out;
}

ReplicateOutput run_stability_replicate(const ExperimentConfig& cfg,
                                        int rep) {
  ReplicateOutput out;
  Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep));
  const auto model = draw_truth(cfg, rng);
  const int max_count = *std::max_element(cfg.stability_counts.begin(),
                                          cfg.stability_counts.end());
  const auto trajectories = simulate_batch(
      model, max_count, cfg.transitions_per_trajectory, rng);
  const auto mode = search_mode_of(cfg);
  const auto graph = overcomplete_graph(mode, model.num_nodes());

  std::vector<Graph> maps;
  for (int count : cfg.stability_counts) {
    SufficientStats stats(model.space(), graph);
    for (int t = 0; t < count; ++t) {
      accumulate_statistics(stats, trajectories[t], model.space());
    }
    OptConfig opt = cfg.opt;
    opt.seed = mix64(cfg.seed, rep * 1000 + count);
    auto result = learn_complete(stats, model.space(), mode, cfg.gprior,
                                 cfg.dprior, opt);
    maps.push_back(result.map_graph);
  }
  // Convergence toward the full-data network.
  for (std::size_t k = 0; k < maps.size(); ++k) {
    out.stability.push_back({rep, cfg.stability_counts[k],
                             hamming_distance(maps[k], maps.back())});
  }
  return out;
}

void write_edge_csv(const std::string& path,
                    const std::vector<EdgeMetricsRow>& rows) {
  std::ostringstream out;
  out << "replicate,n_traj,mode,auroc,aupr,runtime_s,flags\n";
  out.precision(12);
  for (const auto& r : rows) {
    out << r.replicate << "," << r.n_traj << "," << r.mode << "," << r.auroc
        << "," << r.aupr << "," << r.runtime_s << "," << r.flags << "\n";
  }
  write_file(path, out.str());
}

json aggregate_edge_rows(const std::vector<EdgeMetricsRow>& rows) {
  std::map<std::pair<std::string, int>, std::vector<const EdgeMetricsRow*>>
      groups;
  for (const auto& r : rows) groups[{r.mode, r.n_traj}].push_back(&r);
  json agg = json::array();
  for (const auto& [key, members] : groups) {
    std::vector<double> auroc, aupr;
    for (const auto* r : members) {
      auroc.push_back(r->auroc);
      aupr.push_back(r->aupr);
    }
    agg.push_back({{"mode", key.first},
                   {"n_traj", key.second},
                   {"auroc_median", median(auroc)},
                   {"auroc_p25", percentile(auroc, 25)},
                   {"auroc_p75", percentile(auroc, 75)},
                   {"aupr_median", median(aupr)},
                   {"aupr_p25", percentile(aupr, 25)},
                   {"aupr_p75", percentile(aupr, 75)}});
  }
  return agg;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (replicates < 1) throw InvalidModelError("replicates >= 1 required");
  if (nodes < 2) throw InvalidModelError("need at least 2 nodes");
  if (max_in_degree > nodes - 1) {
    throw InvalidModelError("max_in_degree must be < nodes");
  }
  gprior.validate();
}

MetricsReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  MetricsReport report;
  json summary;
  summary["protocol"] = cfg.protocol;
  summary["seed"] = cfg.seed;

  if (cfg.protocol == "complete" || cfg.protocol == "incomplete") {
    std::vector<ReplicateOutput> outputs(cfg.replicates);
    parallel_for(cfg.replicates, cfg.threads, [&](int rep) {
      try {
        outputs[rep] = cfg.protocol == "complete"
                           ? run_complete_replicate(cfg, rep)
                           : run_incomplete_replicate(cfg, rep);
      } catch (const std::exception& e) {
        outputs[rep].failed = true;
        outputs[rep].error = e.what();
      }
    });
    for (const auto& o : outputs) {
      if (o.failed) {
        ++report.failed_replicates;
        continue;
      }
      report.edge_rows.insert(report.edge_rows.end(), o.rows.begin(),
                              o.rows.end());
    }
    summary["aggregates"] = aggregate_edge_rows(report.edge_rows);
  } else if (cfg.protocol == "prior-sweep") {
    // Two mutually coupled spin nodes; the profile runs over the weight
    // that node 0 puts on its single-parent candidate.
    Rng rng = Rng::substream(cfg.seed, 0);
    Graph truth(2, {{0, 1}, {1, 0}});
    auto model = build_glauber_model(truth, cfg.gamma);
    const int max_count = *std::max_element(cfg.sweep_trajectories.begin(),
                                            cfg.sweep_trajectories.end());
    auto trajectories = simulate_batch(
        model, max_count, cfg.transitions_per_trajectory, rng);
    const auto graph = Graph::complete(2);
    for (int count : cfg.sweep_trajectories) {
      SufficientStats stats(model.space(), graph);
      for (int t = 0; t < count; ++t) {
        accumulate_statistics(stats, trajectories[t], model.space());
      }
      for (double c : cfg.sweep_c) {
        NodeMixtureScorer with_c(
            std::vector<NodeStats>{marginalize_stats(stats.nodes[0], {}),
                                   marginalize_stats(stats.nodes[0], {1})},
            cfg.gprior.alpha_for(0), cfg.gprior.beta_for(0), c);
        std::vector<double> values;
        values.reserve(cfg.profile_points);
        for (int p = 0; p < cfg.profile_points; ++p) {
          const double w =
              static_cast<double>(p) / (cfg.profile_points - 1);
          const std::vector<double> pi{1.0 - w, w};
          values.push_back(with_c.score(pi).total);
        }
        const double top = *std::max_element(values.begin(), values.end());
        for (int p = 0; p < cfg.profile_points; ++p) {
          const double w =
              static_cast<double>(p) / (cfg.profile_points - 1);
          report.profile_rows.push_back({c, count, w, values[p] - top});
        }
      }
    }
  } else if (cfg.protocol == "stability") {
    std::vector<ReplicateOutput> outputs(cfg.replicates);
    parallel_for(cfg.replicates, cfg.threads, [&](int rep) {
      try {
        outputs[rep] = run_stability_replicate(cfg, rep);
      } catch (const std::exception& e) {
        outputs[rep].failed = true;
        outputs[rep].error = e.what();
      }
    });
    for (const auto& o : outputs) {
      if (o.failed) {
        ++report.failed_replicates;
        continue;
      }
      report.stability_rows.insert(report.stability_rows.end(),
                                   o.stability.begin(), o.stability.end());
    }
  } else if (cfg.protocol == "scaling") {
    for (int n : cfg.scaling_nodes) {
      ExperimentConfig sub = cfg;
      sub.nodes = n;
      sub.protocol = "incomplete";
      sub.search = "greedy";
      sub.trajectory_counts = {cfg.scaling_trajectories};
      sub.replicates = 1;
      const double t0 = wall_seconds();
      auto one = run_incomplete_replicate(sub, 0);
      const double t1 = wall_seconds();
      if (one.failed) {
        ++report.failed_replicates;
        continue;
      }
      report.scaling_rows.push_back({n, t1 - t0, one.rows.front().auroc});
    }
    json rows = json::array();
    for (const auto& r : report.scaling_rows) {
      rows.push_back({{"nodes", r.nodes}, {"runtime_s", r.runtime_s}});
    }
    summary["scaling"] = rows;
  } else {
    throw InvalidModelError("unknown protocol: " + cfg.protocol);
  }

  summary["failed_replicates"] = report.failed_replicates;
  report.summary_json = summary.dump(2);

  if (!cfg.output_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    const auto dir = fs::path(cfg.output_dir);
    if (!report.edge_rows.empty()) {
      write_edge_csv((dir / "results.csv").string(), report.edge_rows);
    }
    if (!report.profile_rows.empty()) {
      std::ostringstream out;
      out << "c,n_traj,weight_on_parent,value\n";
      out.precision(12);
      for (const auto& r : report.profile_rows) {
        out << r.c << "," << r.n_traj << "," << r.weight_on_parent << ","
            << r.value << "\n";
      }
      write_file((dir / "profiles.csv").string(), out.str());
    }
    if (!report.stability_rows.empty()) {
      std::ostringstream out;
      out << "replicate,n_traj,hamming\n";
      for (const auto& r : report.stability_rows) {
        out << r.replicate << "," << r.n_traj << "," << r.hamming << "\n";
      }
      write_file((dir / "stability.csv").string(), out.str());
    }
    if (!report.scaling_rows.empty()) {
      std::ostringstream out;
      out << "nodes,runtime_s,auroc\n";
      out.precision(12);
      for (const auto& r : report.scaling_rows) {
        out << r.nodes << "," << r.runtime_s << "," << r.auroc << "\n";
      }
      write_file((dir / "scaling.csv").string(), out.str());
    }
    write_file((dir / "summary.json").string(), report.summary_json);

    json metadata;
    metadata["generated_at_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    metadata["version"] = "0.1.0";
    metadata["config"] = {{"seed", cfg.seed},
                          {"protocol", cfg.protocol},
                          {"nodes", cfg.nodes},
                          {"gamma", cfg.gamma},
                          {"replicates", cfg.replicates},
                          {"search", cfg.search},
                          {"greedy_k", cfg.greedy_k}};
    write_file((dir / "metadata.json").string(), metadata.dump(2));
  }
  return report;
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad experiment config: ") + e.what());
  }
  ExperimentConfig cfg;
  cfg.seed = doc.value("seed", cfg.seed);
  cfg.protocol = doc.value("protocol", cfg.protocol);
  cfg.output_dir = doc.value("output_dir", cfg.output_dir);
  cfg.model_file = doc.value("model_file", cfg.model_file);
  cfg.threads = doc.value("threads", cfg.threads);
  cfg.nodes = doc.value("nodes", cfg.nodes);
  cfg.max_in_degree = doc.value("max_in_degree", cfg.max_in_degree);
  cfg.gamma = doc.value("gamma", cfg.gamma);
  if (doc.contains("trajectory_counts")) {
    cfg.trajectory_counts =
        doc.at("trajectory_counts").get<std::vector<int>>();
  }
  cfg.transitions_per_trajectory =
      doc.value("transitions_per_trajectory", cfg.transitions_per_trajectory);
  cfg.n_obs = doc.value("n_obs", cfg.n_obs);
  cfg.noise_variance = doc.value("noise_variance", cfg.noise_variance);
  cfg.gprior.alpha = doc.value("alpha", cfg.gprior.alpha);
  cfg.gprior.beta = doc.value("beta", cfg.gprior.beta);
  cfg.dprior.c = doc.value("dirichlet_c", cfg.dprior.c);
  cfg.search = doc.value("search", cfg.search);
  cfg.greedy_k = doc.value("greedy_k", cfg.greedy_k);
  cfg.replicates = doc.value("replicates", cfg.replicates);
  cfg.em.random_init = doc.value("random_init", cfg.em.random_init);
  cfg.em.max_iterations = doc.value("em_max_iterations",
                                    cfg.em.max_iterations);
  cfg.opt.restarts = doc.value("opt_restarts", cfg.opt.restarts);
  if (doc.contains("sweep_c")) {
    cfg.sweep_c = doc.at("sweep_c").get<std::vector<double>>();
  }
  if (doc.contains("sweep_trajectories")) {
    cfg.sweep_trajectories =
        doc.at("sweep_trajectories").get<std::vector<int>>();
  }
  cfg.profile_points = doc.value("profile_points", cfg.profile_points);
  if (doc.contains("stability_counts")) {
    cfg.stability_counts =
        doc.at("stability_counts").get<std::vector<int>>();
  }
  if (doc.contains("scaling_nodes")) {
    cfg.scaling_nodes = doc.at("scaling_nodes").get<std::vector<int>>();
  }
  cfg.scaling_trajectories =
      doc.value("scaling_trajectories", cfg.scaling_trajectories);
  return cfg;
}

}  // namespace ctbn
