#include <doctest.h>

#include <cmath>
#include <map>

#include "ctbn/errors.hpp"
#include "ctbn/gillespie.hpp"
#include "ctbn/joint.hpp"
#include "ctbn/stats.hpp"
#include "support/oracles.hpp"

using namespace ctbn;

namespace {

CtbnModel single_node_symmetric(double rate) {
  StateSpace space({2});
  Graph g(1);
  Cim cim(0, {}, 2, {});
  cim.set_rate(0, 0, 1, rate);
  cim.set_rate(0, 1, 0, rate);
  return CtbnModel(space, g, {cim});
}

}  // namespace

TEST_CASE("dwell times follow the exponential law") {
  auto model = single_node_symmetric(1.0);
  Rng rng(11);
  auto traj = gillespie_sample(model, StopAfterTransitions{10000},
                               InitialFixed{{0}}, rng);
  REQUIRE(traj.events.size() == 10000);
  double prev = 0.0;
  double mean = 0.0;
  for (const auto& e : traj.events) {
    mean += e.time - prev;
    prev = e.time;
  }
  mean /= static_cast<double>(traj.events.size());
  // Exp(1) sample mean, sigma = 1/sqrt(n)
  CHECK(std::abs(mean - 1.0) < 3.0 / std::sqrt(10000.0));
}

TEST_CASE("transition-count stopping contract") {
  auto model = single_node_symmetric(2.0);
  Rng rng(5);
  auto traj =
      gillespie_sample(model, StopAfterTransitions{10}, InitialUniform{}, rng);
  CHECK(traj.events.size() == 10);
  CHECK(traj.t_end > traj.events.back().time);  // extended holding time
  traj.validate();
}

TEST_CASE("time-horizon stopping contract") {
  auto model = single_node_symmetric(2.0);
  Rng rng(5);
  auto traj = gillespie_sample(model, StopAtTime{3.5}, InitialUniform{}, rng);
  CHECK(traj.t_end == 3.5);
  for (const auto& e : traj.events) CHECK(e.time <= 3.5);
}

TEST_CASE("reproducibility bit for bit") {
  Rng g(3);
  auto graph = random_graph(4, 2, g);
  auto model = build_glauber_model(graph, 0.6);
  Rng a(99), b(99);
  auto ta =
      gillespie_sample(model, StopAfterTransitions{50}, InitialUniform{}, a);
  auto tb =
      gillespie_sample(model, StopAfterTransitions{50}, InitialUniform{}, b);
  CHECK(ta.initial == tb.initial);
  CHECK(ta.t_end == tb.t_end);
  REQUIRE(ta.events.size() == tb.events.size());
  for (std::size_t i = 0; i < ta.events.size(); ++i) {
    CHECK(ta.events[i].time == tb.events[i].time);
    CHECK(ta.events[i].node == tb.events[i].node);
    CHECK(ta.events[i].new_state == tb.events[i].new_state);
  }
}

TEST_CASE("absorbing state terminates early with flag") {
  StateSpace space({2});
  Graph g(1);
  Cim cim(0, {}, 2, {});
  cim.set_rate(0, 0, 1, 1.0);
  // state 1 is absorbing
  CtbnModel model(space, g, {cim});
  Rng rng(2);
  auto traj = gillespie_sample(model, StopAfterTransitions{100},
                               InitialFixed{{0}}, rng);
  CHECK(traj.absorbed);
  CHECK(traj.events.size() == 1);
}

TEST_CASE("empirical rates match the generator") {
  // 2-node chain 0 -> 1 with Glauber rates
  Graph graph(2, {{0, 1}});
  auto model = build_glauber_model(graph, 0.6);
  Rng rng(17);
  auto traj = gillespie_sample(model, StopAfterTransitions{10000},
                               InitialUniform{}, rng);
  auto stats = count_statistics(traj, graph, model.space());
  for (const auto& ns : stats.nodes) {
    const auto& cim = model.cim(ns.node);
    for (std::size_t u = 0; u < ns.nconfigs; ++u) {
      for (int x = 0; x < 2; ++x) {
        const double t = ns.T(u, x);
        const double r = cim.rate(u, x, 1 - x);
        if (t * r < 25.0) continue;  // need counts for the normal bound
        const double m = ns.M(u, x, 1 - x);
        // M | T ~ Poisson(r T)
        CHECK(std::abs(m - r * t) < 3.0 * std::sqrt(r * t));
      }
    }
  }
}

TEST_CASE("first event law matches the amalgamated chain") {
  Graph graph(2, {{0, 1}});
  auto model = build_glauber_model(graph, 0.6);
  auto gen = amalgamate(model);
  const std::vector<int> init{0, 1};
  const auto s0 = gen.state_index(init);
  const double exit = -gen.rate(s0, s0);

  // Bin the first event by (node, time quartile under Exp(exit)).
  const int draws = 10000;
  Rng rng(23);
  std::map<std::pair<int, int>, int> counts;
  for (int d = 0; d < draws; ++d) {
    auto traj = gillespie_sample(model, StopAfterTransitions{1},
                                 InitialFixed{init}, rng);
    REQUIRE(traj.events.size() == 1);
    const auto& e = traj.events[0];
    const double uq = 1.0 - std::exp(-exit * e.time);
    const int bin = std::min(3, static_cast<int>(uq * 4.0));
    ++counts[{e.node, bin}];
  }

  // Expected: node i with prob rate_i/exit, quartiles uniform.
  double chi2 = 0.0;
  int cells = 0;
  for (int node = 0; node < 2; ++node) {
    std::vector<int> next = init;
    next[node] = 1 - init[node];
    const double p_node = gen.rate(s0, gen.state_index(next)) / exit;
    for (int bin = 0; bin < 4; ++bin) {
      const double expected = draws * p_node / 4.0;
      const double got = counts[{node, bin}];
      chi2 += (got - expected) * (got - expected) / expected;
      ++cells;
    }
  }
  const double p = ctbn::testing::chi_square_pvalue(chi2, cells - 1);
  CHECK(p > 0.01);
}

TEST_CASE("stationary initial draw matches the joint stationary law") {
  StateSpace space({2});
  Graph g(1);
  Cim cim(0, {}, 2, {});
  cim.set_rate(0, 0, 1, 2.0);
  cim.set_rate(0, 1, 0, 1.0);  // stationary (1/3, 2/3)
  CtbnModel model(space, g, {cim});
  Rng rng(77);
  int ones = 0;
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) {
    auto traj = gillespie_sample(model, StopAfterTransitions{1},
                                 InitialStationary{}, rng);
    ones += traj.initial[0];
  }
  const double p = 2.0 / 3.0;
  const double sigma = std::sqrt(draws * p * (1.0 - p));
  CHECK(std::abs(ones - draws * p) < 3.0 * sigma);
}

TEST_CASE("observe") {
  auto model = single_node_symmetric(1.0);
  Rng rng(31);
  auto traj = gillespie_sample(model, StopAfterTransitions{20},
                               InitialFixed{{0}}, rng);

  SUBCASE("count and range contract") {
    auto obs = observe(traj, model.space(), 10,
                       NoiseModel::gaussian(0.2), rng);
    CHECK(obs.rows.size() == 10);
    double prev = 0.0;
    for (const auto& row : obs.rows) {
      CHECK(row.time >= prev);
      CHECK(row.time <= traj.t_end);
      prev = row.time;
    }
  }

  SUBCASE("degenerate noise reproduces labels") {
    auto obs = observe(traj, model.space(), 50,
                       NoiseModel::gaussian(1e-12), rng);
    for (const auto& row : obs.rows) {
      const auto state = traj.state_at(row.time);
      CHECK(std::abs(*row.values[0] -
                     model.space().label(0, state[0])) < 1e-4);
    }
  }

  SUBCASE("gaussian variance recovered") {
    double ss = 0.0;
    int n = 0;
    auto traj2 = gillespie_sample(model, StopAfterTransitions{100},
                                  InitialFixed{{0}}, rng);
    for (int rep = 0; rep < 40; ++rep) {
      auto obs = observe(traj2, model.space(), 100,
                         NoiseModel::gaussian(0.2), rng);
      for (const auto& row : obs.rows) {
        const auto state = traj2.state_at(row.time);
        const double d = *row.values[0] - model.space().label(0, state[0]);
        ss += d * d;
        ++n;
      }
    }
    const double var = ss / n;
    // chi-square concentration: sd of sample variance ~ var*sqrt(2/n)
    CHECK(std::abs(var - 0.2) < 3.0 * 0.2 * std::sqrt(2.0 / n));
  }

  SUBCASE("erf-basal noise cannot be sampled") {
    CHECK_THROWS_AS(observe(traj, model.space(), 5,
                            NoiseModel::erf_basal({0.0}, {1.0}), rng),
                    InvalidModelError);
  }
}
