#include "ctbn/gillespie.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctbn/errors.hpp"
#include "ctbn/joint.hpp"

namespace ctbn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> draw_initial(const CtbnModel& model, const InitialRule& rule,
                              Rng& rng) {
  const int n = model.num_nodes();
  if (std::holds_alternative<InitialFixed>(rule)) {
    const auto& s = std::get<InitialFixed>(rule).state;
    if (static_cast<int>(s.size()) != n) {
      throw InvalidModelError("initial state size mismatch");
    }
    return s;
  }
  if (std::holds_alternative<InitialStationary>(rule)) {
    const auto gen = amalgamate(model);
    const auto pi = stationary_distribution(gen);
    double u = rng.uniform01();
    std::size_t s = 0;
    for (; s + 1 < pi.size(); ++s) {
      if (u < pi[s]) break;
      u -= pi[s];
    }
    return gen.decode_state(s);
  }
  // Uniform over the product space = independent uniform per node.
  std::vector<int> s(n);
  for (int i = 0; i < n; ++i) {
    s[i] = static_cast<int>(
        rng.uniform_int(model.space().cardinality(i)));
  }
  return s;
}

}  // namespace

Trajectory gillespie_sample(const CtbnModel& model, const StopRule& stop,
                            const InitialRule& initial, Rng& rng) {
  const int n = model.num_nodes();
  Trajectory traj;
  traj.initial = draw_initial(model, initial, rng);
  std::vector<int> state = traj.initial;

  std::vector<double> exit(n);
  std::vector<double> clock(n);
  double now = 0.0;

  auto refresh = [&](int i) {
    const auto u = model.parent_config_of(i, state);
    exit[i] = model.cim(i).exit_rate(u, state[i]);
    clock[i] = exit[i] > 0.0 ? now + rng.exponential(exit[i]) : kInf;
  };
  for (int i = 0; i < n; ++i) refresh(i);

  const bool by_count = std::holds_alternative<StopAfterTransitions>(stop);
  const int target =
      by_count ? std::get<StopAfterTransitions>(stop).count : 0;
  const double horizon = by_count ? kInf : std::get<StopAtTime>(stop).t_end;

  while (true) {
    if (by_count && static_cast<int>(traj.events.size()) >= target) break;
    int firing = -1;
    double t_min = kInf;
    for (int i = 0; i < n; ++i) {
      if (clock[i] < t_min) {
        t_min = clock[i];
        firing = i;
      }
    }
    if (firing < 0) {
      // Absorbing joint state: no exit rate anywhere.
      traj.absorbed = true;
      traj.t_end = by_count ? now : horizon;
      return traj;
    }
    if (!by_count && t_min > horizon) break;
    now = t_min;

    // Choose the target state proportional to the conditional rates.
    const auto u = model.parent_config_of(firing, state);
    const auto& cim = model.cim(firing);
    double pick = rng.uniform01() * exit[firing];
    int new_state = -1;
    for (int y = 0; y < cim.cardinality(); ++y) {
      if (y == state[firing]) continue;
      pick -= cim.rate(u, state[firing], y);
      if (pick <= 0.0) {
        new_state = y;
        break;
      }
    }
    if (new_state < 0) {
      // Guard against roundoff in the cumulative subtraction.
      new_state = cim.cardinality() - 1;
      if (new_state == state[firing]) --new_state;
    }
    traj.events.push_back({now, firing, new_state});
    state[firing] = new_state;

    refresh(firing);
    for (int child : model.graph().children(firing)) {
      if (child != firing) refresh(child);
    }
  }

  if (by_count) {
    // Extend the horizon by one sampled holding time of the final state.
    double total_exit = 0.0;
    for (int i = 0; i < n; ++i) total_exit += exit[i];
    if (total_exit > 0.0) {
      traj.t_end = now + rng.exponential(total_exit);
    } else {
      traj.t_end = now;
      traj.absorbed = true;
    }
  } else {
    traj.t_end = horizon;
  }
  return traj;
}

ObservationSet observe(const Trajectory& traj, const StateSpace& space,
                       int n_obs, const NoiseModel& noise, Rng& rng) {
  if (n_obs < 1) throw InvalidModelError("observe: n_obs >= 1 required");
  if (noise.kind == NoiseModel::Kind::ErfBasal) {
    throw InvalidModelError(
        "erf-basal noise has no generative form; use it for ingestion only");
  }
  const int n = space.num_nodes();
  std::vector<double> times(n_obs);
  for (auto& t : times) t = rng.uniform(0.0, traj.t_end);
  std::sort(times.begin(), times.end());

  ObservationSet obs;
  obs.t_end = traj.t_end;
  obs.noise = noise;
  obs.rows.reserve(n_obs);
  for (double t : times) {
    const auto state = traj.state_at(t);
    ObservationSet::Row row;
    row.time = t;
    row.values.resize(n);
    for (int i = 0; i < n; ++i) {
      if (noise.kind == NoiseModel::Kind::Gaussian) {
        row.values[i] = rng.normal(space.label(i, state[i]),
                                   std::sqrt(noise.variance));
      } else {
        const auto& probs = noise.confusion[i][state[i]];
        double u = rng.uniform01();
        std::size_t y = 0;
        for (; y + 1 < probs.size(); ++y) {
          if (u < probs[y]) break;
          u -= probs[y];
        }
        row.values[i] = static_cast<double>(y);
      }
    }
    obs.rows.push_back(std::move(row));
  }
  return obs;
}

}  // namespace ctbn
