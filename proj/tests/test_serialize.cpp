#include <doctest.h>

#include <cmath>

#include "ctbn/gillespie.hpp"
#include "ctbn/serialize.hpp"

using namespace ctbn;

TEST_CASE("model round trip") {
  Rng rng(3);
  auto graph = random_graph(4, 2, rng);
  auto model = build_glauber_model(graph, 0.6);
  auto text = model_to_json(model);
  auto back = model_from_json(text);
  CHECK(back.num_nodes() == model.num_nodes());
  CHECK(back.graph().edges() == model.graph().edges());
  for (int i = 0; i < model.num_nodes(); ++i) {
    CHECK(back.space().labels(i) == model.space().labels(i));
    const auto& a = model.cim(i);
    const auto& b = back.cim(i);
    REQUIRE(a.num_parent_configs() == b.num_parent_configs());
    for (std::size_t u = 0; u < a.num_parent_configs(); ++u) {
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
          CHECK(a.rate(u, x, y) == doctest::Approx(b.rate(u, x, y)));
        }
      }
    }
  }
}

TEST_CASE("trajectory round trip preserves values exactly") {
  Rng rng(5);
  auto graph = random_graph(3, 2, rng);
  auto model = build_glauber_model(graph, 0.6);
  auto traj = gillespie_sample(model, StopAfterTransitions{20},
                               InitialUniform{}, rng);
  auto line = trajectory_to_json_line(traj);
  auto back = trajectory_from_json_line(line);
  CHECK(back.initial == traj.initial);
  CHECK(back.t_end == traj.t_end);
  REQUIRE(back.events.size() == traj.events.size());
  for (std::size_t k = 0; k < traj.events.size(); ++k) {
    CHECK(back.events[k].time == traj.events[k].time);
    CHECK(back.events[k].node == traj.events[k].node);
    CHECK(back.events[k].new_state == traj.events[k].new_state);
  }
}

TEST_CASE("observation csv") {
  ObservationSet obs;
  obs.t_end = 3.0;
  obs.noise = NoiseModel::gaussian(0.2);
  obs.rows.push_back({0.5, {1.25, std::nullopt}});
  obs.rows.push_back({2.25, {-0.75, 0.5}});
  const auto csv = observations_to_csv(obs, 2);
  CHECK(csv.rfind("time,node_0,node_1\n", 0) == 0);
  auto back = observations_from_csv(csv, 3.0, obs.noise);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].time == 0.5);
  CHECK(back.rows[0].values[0].value() == 1.25);
  CHECK_FALSE(back.rows[0].values[1].has_value());
  CHECK(back.rows[1].values[1].value() == 0.5);
}

TEST_CASE("noise model json") {
  auto g = noise_from_json(R"({"type":"gaussian","variance":0.3})");
  CHECK(g.kind == NoiseModel::Kind::Gaussian);
  CHECK(g.variance == 0.3);
  auto e = noise_from_json(
      R"({"type":"erf_basal","mu":[1.0,2.0],"sigma":[0.5,0.5]})");
  CHECK(e.kind == NoiseModel::Kind::ErfBasal);
  CHECK(e.erf_mu[1] == 2.0);
  auto c = noise_from_json(
      R"({"type":"confusion","matrices":[[[0.9,0.1],[0.2,0.8]]]})");
  CHECK(c.confusion[0][1][0] == 0.2);
  auto round = noise_from_json(noise_to_json(g));
  CHECK(round.variance == 0.3);
}

TEST_CASE("format errors carry the format error type") {
  CHECK_THROWS_AS(model_from_json("{not json"), FormatError);
  CHECK_THROWS_AS(trajectory_from_json_line("[]"), FormatError);
  CHECK_THROWS_AS(observations_from_csv("", 1.0, NoiseModel::gaussian(0.2)),
                  FormatError);
  CHECK_THROWS_AS(noise_from_json(R"({"type":"unknown"})"), FormatError);
}

TEST_CASE("stats dump contains per-node tables") {
  StateSpace space({2, 2});
  Graph graph(2, {{0, 1}});
  Trajectory traj;
  traj.initial = {0, 0};
  traj.events = {{0.5, 1, 1}};
  traj.t_end = 1.0;
  auto stats = count_statistics(traj, graph, space);
  const auto dump = stats_to_json(stats);
  CHECK(dump.find("\"node\": 0") != std::string::npos);
  CHECK(dump.find("\"M\"") != std::string::npos);
  CHECK(dump.find("\"T\"") != std::string::npos);
}
