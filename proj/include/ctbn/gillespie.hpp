#ifndef CTBN_GILLESPIE_HPP
#define CTBN_GILLESPIE_HPP

#include <optional>
#include <variant>
#include <vector>

#include "ctbn/cim.hpp"
#include "ctbn/rng.hpp"
#include "ctbn/trajectory.hpp"

namespace ctbn {

// Stop after a fixed number of transitions. The horizon is extended past
// the last event by one sampled holding time so the final dwell is not
// truncated at an event.
struct StopAfterTransitions {
  int count;
};
// Stop at a fixed horizon.
struct StopAtTime {
  double t_end;
};
using StopRule = std::variant<StopAfterTransitions, StopAtTime>;

struct InitialUniform {};
struct InitialFixed {
  std::vector<int> state;
};
// Draw the initial state from the stationary distribution of the
// amalgamated chain (small systems only).
struct InitialStationary {};
using InitialRule = std::variant<InitialUniform, InitialFixed,
                                 InitialStationary>;

// Exact CTBN sampling realized node-wise: per-node exponential clocks from
// the current conditional rates, fire the earliest, then refresh the clocks
// of the changed node and its children.
Trajectory gillespie_sample(const CtbnModel& model, const StopRule& stop,
                            const InitialRule& initial, Rng& rng);

// n_obs observation times i.i.d. uniform on [0, t_end] (then sorted), with
// values drawn from the noise model applied to the latent state. ErfBasal
// noise is an ingestion-side likelihood model and cannot be sampled from.
ObservationSet observe(const Trajectory& traj, const StateSpace& space,
                       int n_obs, const NoiseModel& noise, Rng& rng);

}  // namespace ctbn

#endif
