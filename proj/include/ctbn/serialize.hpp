#ifndef CTBN_SERIALIZE_HPP
#define CTBN_SERIALIZE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ctbn/cim.hpp"
#include "ctbn/stats.hpp"
#include "ctbn/structure_learner.hpp"
#include "ctbn/trajectory.hpp"

namespace ctbn {

// Model file: {nodes:[{id,cardinality,labels}], edges:[[from,to]],
// cims:[{node,parents,rates:[u][x][x']}]}. Parent configurations use mixed
// radix over the declared parent list, first parent least significant.
std::string model_to_json(const CtbnModel& model);
CtbnModel model_from_json(const std::string& text);
void save_model(const CtbnModel& model, const std::string& path);
CtbnModel load_model(const std::string& path);

// Trajectories: JSON lines, one per trajectory:
// {"initial":[...],"events":[[t,node,state],...],"t_end":T}
std::string trajectory_to_json_line(const Trajectory& traj);
Trajectory trajectory_from_json_line(const std::string& line);
void save_trajectories(const std::vector<Trajectory>& trajs,
                       const std::string& path);
std::vector<Trajectory> load_trajectories(const std::string& path);

// Observations: CSV with header time,node_0,...,node_{N-1}; empty cells
// are missing values. The horizon and noise model travel separately.
std::string observations_to_csv(const ObservationSet& obs, int num_nodes);
ObservationSet observations_from_csv(const std::string& text, double t_end,
                                     const NoiseModel& noise);
void save_observations(const ObservationSet& obs, int num_nodes,
                       const std::string& path);
ObservationSet load_observations(const std::string& path, double t_end,
                                 const NoiseModel& noise);

// Noise model descriptor:
// {"type":"gaussian","variance":v} |
// {"type":"confusion","matrices":[[..]]} |
// {"type":"erf_basal","mu":[...],"sigma":[...]}
std::string noise_to_json(const NoiseModel& noise);
NoiseModel noise_from_json(const std::string& text);

// Statistics dump for debugging: one object per node.
std::string stats_to_json(const SufficientStats& stats);

// Learn result: {pi, edge_probs, map_graph, trace, diagnostics}.
std::string learn_result_to_json(const LearnResult& result);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ctbn

#endif
