// Command-line interface: simulation, learning, scoring, evaluation and
// the seeded experiment runner.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctbn/errors.hpp"
#include "ctbn/experiment.hpp"
#include "ctbn/gillespie.hpp"
#include "ctbn/metrics.hpp"
#include "ctbn/scoring.hpp"
#include "ctbn/serialize.hpp"
#include "ctbn/structure_learner.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFormat = 3;
constexpr int kExitDegenerate = 4;

struct CommonLearnArgs {
  std::string search = "exhaustive";
  int greedy_k = 2;
  double alpha = 5.0;
  double beta = 10.0;
  double dirichlet_c = 0.9;
  int restarts = 100;
  std::uint64_t seed = 0;
  std::string out;
};

ctbn::SearchMode make_mode(const CommonLearnArgs& args) {
  if (args.search == "exhaustive") return ctbn::SearchMode::exhaustive();
  if (args.search == "greedy") return ctbn::SearchMode::greedy(args.greedy_k);
  throw ctbn::InvalidModelError("unknown search mode: " + args.search);
}

void add_learn_flags(CLI::App* cmd, CommonLearnArgs& args) {
  cmd->add_option("--search", args.search,
                  "candidate family: exhaustive or greedy");
  cmd->add_option("--greedy-k", args.greedy_k, "max parents in greedy mode");
  cmd->add_option("--alpha", args.alpha, "gamma prior shape");
  cmd->add_option("--beta", args.beta, "gamma prior rate");
  cmd->add_option("--dirichlet-c", args.dirichlet_c,
                  "Dirichlet concentration over parent sets");
  cmd->add_option("--restarts", args.restarts, "simplex optimizer restarts");
  cmd->add_option("--seed", args.seed, "random seed")->required();
  cmd->add_option("--out", args.out, "output JSON path")->required();
}

std::vector<std::string> expand_inputs(const std::vector<std::string>& paths) {
  namespace fs = std::filesystem;
  std::vector<std::string> out;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<std::string> inner;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.path().extension() == ".csv") {
          inner.push_back(entry.path().string());
        }
      }
      std::sort(inner.begin(), inner.end());
      out.insert(out.end(), inner.begin(), inner.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

int run_simulate(const std::string& model_path, int count, int transitions,
                 double t_end, std::uint64_t seed, const std::string& out,
                 int n_obs, const std::string& noise_json,
                 const std::string& obs_dir) {
  const auto model = ctbn::load_model(model_path);
  ctbn::Rng rng(seed);
  std::vector<ctbn::Trajectory> trajectories;
  trajectories.reserve(count);
  for (int k = 0; k < count; ++k) {
    ctbn::StopRule stop;
    if (t_end > 0.0) {
      stop = ctbn::StopAtTime{t_end};
    } else {
      stop = ctbn::StopAfterTransitions{transitions};
    }
    trajectories.push_back(ctbn::gillespie_sample(
        model, stop, ctbn::InitialUniform{}, rng));
  }
  ctbn::save_trajectories(trajectories, out);
  std::printf("wrote %d trajectories to %s\n", count, out.c_str());

  if (n_obs > 0) {
    if (obs_dir.empty()) {
      throw ctbn::InvalidModelError("--obs-dir required with --observe");
    }
    const auto noise = noise_json.empty()
                           ? ctbn::NoiseModel::gaussian(0.2)
                           : ctbn::noise_from_json(noise_json);
    std::filesystem::create_directories(obs_dir);
    json meta;
    meta["noise"] = json::parse(ctbn::noise_to_json(noise));
    meta["t_end"] = json::array();
    for (std::size_t k = 0; k < trajectories.size(); ++k) {
      auto obs = ctbn::observe(trajectories[k], model.space(), n_obs, noise,
                               rng);
      char name[64];
      std::snprintf(name, sizeof(name), "obs_%04zu.csv", k);
      ctbn::save_observations(
          obs, model.num_nodes(),
          (std::filesystem::path(obs_dir) / name).string());
      meta["t_end"].push_back(obs.t_end);
    }
    ctbn::write_file(
        (std::filesystem::path(obs_dir) / "observations.json").string(),
        meta.dump(2));
    std::printf("wrote %zu observation files to %s\n", trajectories.size(),
                obs_dir.c_str());
  }
  return kExitOk;
}

int run_learn_complete(const std::string& model_path,
                       const std::string& traj_path,
                       const CommonLearnArgs& args) {
  const auto model = ctbn::load_model(model_path);
  const auto trajectories = ctbn::load_trajectories(traj_path);
  ctbn::GammaPrior gprior;
  gprior.alpha = args.alpha;
  gprior.beta = args.beta;
  ctbn::DirichletPrior dprior;
  dprior.c = args.dirichlet_c;
  ctbn::OptConfig opt;
  opt.restarts = args.restarts;
  opt.seed = args.seed;
  const auto result = ctbn::learn_complete(
      trajectories, model.space(), make_mode(args), gprior, dprior, opt);
  ctbn::write_file(args.out, ctbn::learn_result_to_json(result));
  std::printf("wrote %s\n", args.out.c_str());
  return kExitOk;
}

int run_learn_incomplete(const std::string& model_path,
                         const std::vector<std::string>& obs_paths,
                         const std::string& noise_json, double t_end,
                         const CommonLearnArgs& args) {
  const auto model = ctbn::load_model(model_path);
  const auto noise = noise_json.empty()
                         ? ctbn::NoiseModel::gaussian(0.2)
                         : ctbn::noise_from_json(noise_json);
  std::vector<ctbn::ObservationSet> obs_sets;
  for (const auto& path : expand_inputs(obs_paths)) {
    // Default horizon: the last measurement time in the file.
    auto obs = ctbn::load_observations(path, /*t_end=*/0.0, noise);
    obs.t_end = t_end > 0.0
                    ? t_end
                    : (obs.rows.empty() ? 1.0 : obs.rows.back().time);
    obs.validate();
    obs_sets.push_back(std::move(obs));
  }
  ctbn::GammaPrior gprior;
  gprior.alpha = args.alpha;
  gprior.beta = args.beta;
  ctbn::DirichletPrior dprior;
  dprior.c = args.dirichlet_c;
  ctbn::OptConfig opt;
  opt.restarts = args.restarts;
  opt.seed = args.seed;
  ctbn::EmConfig em;
  em.init_seed = args.seed;
  const auto result = ctbn::learn_incomplete(
      obs_sets, model.space(), make_mode(args), gprior, dprior,
      ctbn::EngineConfig{}, opt, em);
  ctbn::write_file(args.out, ctbn::learn_result_to_json(result));
  std::printf("wrote %s\n", args.out.c_str());
  return kExitOk;
}

int run_score(const std::string& model_path, const std::string& traj_path,
              double alpha, double beta) {
  const auto model = ctbn::load_model(model_path);
  const auto trajectories = ctbn::load_trajectories(traj_path);
  ctbn::SufficientStats stats(model.space(), model.graph());
  for (const auto& traj : trajectories) {
    ctbn::accumulate_statistics(stats, traj, model.space());
  }
  ctbn::GammaPrior gprior;
  gprior.alpha = alpha;
  gprior.beta = beta;
  json out;
  out["complete_log_likelihood"] =
      ctbn::complete_log_likelihood(stats, model);
  out["exact_marginal_score"] = ctbn::exact_marginal_score(stats, gprior);
  out["statistics"] = json::parse(ctbn::stats_to_json(stats));
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int run_eval(const std::string& result_path, const std::string& truth_path) {
  const auto truth_model = ctbn::load_model(truth_path);
  const auto doc = json::parse(ctbn::read_file(result_path));
  const auto scores =
      doc.at("edge_probs").get<std::vector<std::vector<double>>>();
  const auto metrics = ctbn::roc_pr(scores, truth_model.graph());
  std::vector<std::pair<int, int>> map_edges;
  if (doc.contains("map_graph")) {
    for (const auto& e : doc.at("map_graph")) {
      map_edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
  }
  json out;
  out["auroc"] = metrics.auroc;
  out["aupr"] = metrics.aupr;
  if (!map_edges.empty() || doc.contains("map_graph")) {
    ctbn::Graph map_graph(truth_model.num_nodes(), map_edges);
    out["hamming"] = ctbn::hamming_distance(map_graph, truth_model.graph());
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int run_experiment_cmd(const std::string& config_path,
                       std::optional<std::uint64_t> seed,
                       const std::string& out_dir, int threads) {
  auto cfg = config_path.empty()
                 ? ctbn::ExperimentConfig{}
                 : ctbn::experiment_config_from_json(
                       ctbn::read_file(config_path));
  if (seed.has_value()) cfg.seed = *seed;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (threads > 0) cfg.threads = threads;
  const auto report = ctbn::run_experiment(cfg);
  std::cout << report.summary_json << "\n";
  if (report.failed_replicates > 0) {
    std::fprintf(stderr, "warning: %d replicate(s) failed\n",
                 report.failed_replicates);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure learning for continuous-time Bayesian networks"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "sample trajectories");
  std::string sim_model, sim_out, sim_noise, sim_obs_dir;
  int sim_count = 1, sim_transitions = 10, sim_observe = 0;
  double sim_t_end = 0.0;
  std::uint64_t sim_seed = 0;
  sim->add_option("--model", sim_model, "model JSON")->required();
  sim->add_option("--count", sim_count, "number of trajectories");
  sim->add_option("--transitions", sim_transitions,
                  "transitions per trajectory");
  sim->add_option("--t-end", sim_t_end, "fixed horizon instead");
  sim->add_option("--seed", sim_seed, "random seed")->required();
  sim->add_option("--out", sim_out, "trajectory JSONL path")->required();
  sim->add_option("--observe", sim_observe,
                  "also emit this many noisy observations per trajectory");
  sim->add_option("--noise", sim_noise, "noise model JSON string");
  sim->add_option("--obs-dir", sim_obs_dir, "observation output directory");

  // learn-complete
  auto* lc = app.add_subcommand("learn-complete",
                                "learn structure from full sample paths");
  std::string lc_model, lc_trajs;
  CommonLearnArgs lc_args;
  lc->add_option("--model", lc_model, "model JSON (for the state space)")
      ->required();
  lc->add_option("--trajectories", lc_trajs, "trajectory JSONL")->required();
  add_learn_flags(lc, lc_args);

  // learn-incomplete
  auto* li = app.add_subcommand(
      "learn-incomplete", "learn structure from noisy observations");
  std::string li_model, li_noise;
  std::vector<std::string> li_obs;
  double li_t_end = 0.0;
  CommonLearnArgs li_args;
  li->add_option("--model", li_model, "model JSON (for the state space)")
      ->required();
  li->add_option("--obs", li_obs,
                 "observation CSV files or directories")
      ->required();
  li->add_option("--noise", li_noise, "noise model JSON string");
  li->add_option("--t-end", li_t_end,
                 "horizon (default: last observation time per file)");
  add_learn_flags(li, li_args);

  // score
  auto* sc = app.add_subcommand("score", "score trajectories under a model");
  std::string sc_model, sc_trajs;
  double sc_alpha = 5.0, sc_beta = 10.0;
  sc->add_option("--model", sc_model, "model JSON")->required();
  sc->add_option("--trajectories", sc_trajs, "trajectory JSONL")->required();
  sc->add_option("--alpha", sc_alpha, "gamma prior shape");
  sc->add_option("--beta", sc_beta, "gamma prior rate");

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate a learned structure");
  std::string ev_result, ev_truth;
  ev->add_option("--result", ev_result, "learn result JSON")->required();
  ev->add_option("--truth", ev_truth, "ground-truth model JSON")->required();

  // experiment
  auto* ex = app.add_subcommand("experiment", "run a seeded experiment");
  std::string ex_config, ex_out;
  std::uint64_t ex_seed = 0;
  bool ex_seed_set = false;
  int ex_threads = 0;
  ex->add_option("--config", ex_config, "experiment config JSON file");
  ex->add_option("--seed", ex_seed, "seed override")
      ->each([&](const std::string&) { ex_seed_set = true; });
  ex->add_option("--out", ex_out, "output directory");
  ex->add_option("--threads", ex_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sim->parsed()) {
      return run_simulate(sim_model, sim_count, sim_transitions, sim_t_end,
                          sim_seed, sim_out, sim_observe, sim_noise,
                          sim_obs_dir);
    }
    if (lc->parsed()) return run_learn_complete(lc_model, lc_trajs, lc_args);
    if (li->parsed()) {
      return run_learn_incomplete(li_model, li_obs, li_noise, li_t_end,
                                  li_args);
    }
    if (sc->parsed()) return run_score(sc_model, sc_trajs, sc_alpha, sc_beta);
    if (ev->parsed()) return run_eval(ev_result, ev_truth);
    if (ex->parsed()) {
      return run_experiment_cmd(
          ex_config,
          ex_seed_set ? std::optional<std::uint64_t>(ex_seed) : std::nullopt,
          ex_out, ex_threads);
    }
  } catch (const ctbn::DegenerateMetricError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDegenerate;
  } catch (const ctbn::FormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFormat;
  } catch (const ctbn::CtbnError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
