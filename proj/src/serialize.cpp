#include "ctbn/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ctbn/errors.hpp"

namespace ctbn {

using nlohmann::json;

namespace {

json model_to_json_obj(const CtbnModel& model) {
  json doc;
  doc["nodes"] = json::array();
  for (int i = 0; i < model.num_nodes(); ++i) {
    doc["nodes"].push_back({{"id", i},
                            {"cardinality", model.space().cardinality(i)},
                            {"labels", model.space().labels(i)}});
  }
  doc["edges"] = json::array();
  for (const auto& [from, to] : model.graph().edges()) {
    doc["edges"].push_back({from, to});
  }
  doc["cims"] = json::array();
  for (int i = 0; i < model.num_nodes(); ++i) {
    const auto& cim = model.cim(i);
    json rates = json::array();
    for (std::size_t u = 0; u < cim.num_parent_configs(); ++u) {
      json per_x = json::array();
      for (int x = 0; x < cim.cardinality(); ++x) {
        json row = json::array();
        for (int y = 0; y < cim.cardinality(); ++y) {
          row.push_back(cim.rate(u, x, y));
        }
        per_x.push_back(row);
      }
      rates.push_back(per_x);
    }
    doc["cims"].push_back(
        {{"node", i}, {"parents", cim.parents()}, {"rates", rates}});
  }
  return doc;
}

}  // namespace

std::string model_to_json(const CtbnModel& model) {
  return model_to_json_obj(model).dump(2);
}

CtbnModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad model JSON: ") + e.what());
  }
  try {
    std::vector<int> cards(doc.at("nodes").size());
    std::vector<std::vector<double>> labels(doc.at("nodes").size());
    for (const auto& node : doc.at("nodes")) {
      const int id = node.at("id").get<int>();
      cards.at(id) = node.at("cardinality").get<int>();
      if (node.contains("labels")) {
        labels.at(id) = node.at("labels").get<std::vector<double>>();
      }
    }
    StateSpace space(cards);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!labels[i].empty()) {
        space.set_labels(static_cast<int>(i), labels[i]);
      }
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc.at("edges")) {
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    Graph graph(static_cast<int>(cards.size()), edges);
    std::vector<Cim> cims;
    cims.reserve(cards.size());
    std::vector<json> cim_docs(cards.size());
    for (const auto& c : doc.at("cims")) {
      cim_docs.at(c.at("node").get<int>()) = c;
    }
    for (std::size_t i = 0; i < cards.size(); ++i) {
      const auto& c = cim_docs[i];
      const auto parents = c.at("parents").get<std::vector<int>>();
      std::vector<int> pcards;
      for (int p : parents) pcards.push_back(cards.at(p));
      Cim cim(static_cast<int>(i), parents, cards[i], pcards);
      const auto& rates = c.at("rates");
      for (std::size_t u = 0; u < cim.num_parent_configs(); ++u) {
        for (int x = 0; x < cards[i]; ++x) {
          for (int y = 0; y < cards[i]; ++y) {
            if (y != x) {
              cim.set_rate(u, x, y,
                           rates.at(u).at(x).at(y).get<double>());
            }
          }
        }
      }
      cims.push_back(std::move(cim));
    }
    return CtbnModel(std::move(space), std::move(graph), std::move(cims));
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad model JSON: ") + e.what());
  }
}

void save_model(const CtbnModel& model, const std::string& path) {
  write_file(path, model_to_json(model));
}

CtbnModel load_model(const std::string& path) {
  return model_from_json(read_file(path));
}

std::string trajectory_to_json_line(const Trajectory& traj) {
  json doc;
  doc["initial"] = traj.initial;
  doc["events"] = json::array();
  for (const auto& e : traj.events) {
    doc["events"].push_back({e.time, e.node, e.new_state});
  }
  doc["t_end"] = traj.t_end;
  if (traj.absorbed) doc["absorbed"] = true;
  return doc.dump();
}

Trajectory trajectory_from_json_line(const std::string& line) {
  try {
    const json doc = json::parse(line);
    Trajectory traj;
    traj.initial = doc.at("initial").get<std::vector<int>>();
    for (const auto& e : doc.at("events")) {
      traj.events.push_back({e.at(0).get<double>(), e.at(1).get<int>(),
                             e.at(2).get<int>()});
    }
    traj.t_end = doc.at("t_end").get<double>();
    traj.absorbed = doc.value("absorbed", false);
    traj.validate();
    return traj;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad trajectory line: ") + e.what());
  }
}

void save_trajectories(const std::vector<Trajectory>& trajs,
                       const std::string& path) {
  std::ostringstream out;
  for (const auto& traj : trajs) out << trajectory_to_json_line(traj) << "\n";
  write_file(path, out.str());
}

std::vector<Trajectory> load_trajectories(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<Trajectory> trajs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    trajs.push_back(trajectory_from_json_line(line));
  }
  return trajs;
}

std::string observations_to_csv(const ObservationSet& obs, int num_nodes) {
  std::ostringstream out;
  out << "time";
  for (int i = 0; i < num_nodes; ++i) out << ",node_" << i;
  out << "\n";
  out.precision(17);
  for (const auto& row : obs.rows) {
    out << row.time;
    for (int i = 0; i < num_nodes; ++i) {
      out << ",";
      if (row.values[i].has_value()) out << *row.values[i];
    }
    out << "\n";
  }
  return out.str();
}

ObservationSet observations_from_csv(const std::string& text, double t_end,
                                     const NoiseModel& noise) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty observation CSV");
  int num_nodes = -1;  // count columns from the header
  {
    num_nodes = 0;
    for (char c : line) {
      if (c == ',') ++num_nodes;
    }
  }
  ObservationSet obs;
  obs.t_end = t_end;
  obs.noise = noise;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row_in(line);
    std::string cell;
    ObservationSet::Row row;
    if (!std::getline(row_in, cell, ',')) {
      throw FormatError("bad observation row: " + line);
    }
    row.time = std::stod(cell);
    for (int i = 0; i < num_nodes; ++i) {
      if (!std::getline(row_in, cell, ',')) cell.clear();
      if (cell.empty()) {
        row.values.emplace_back(std::nullopt);
      } else {
        row.values.emplace_back(std::stod(cell));
      }
    }
    obs.rows.push_back(std::move(row));
  }
  std::sort(obs.rows.begin(), obs.rows.end(),
            [](const auto& a, const auto& b) { return a.time < b.time; });
  obs.validate();
  return obs;
}

void save_observations(const ObservationSet& obs, int num_nodes,
                       const std::string& path) {
  write_file(path, observations_to_csv(obs, num_nodes));
}

ObservationSet load_observations(const std::string& path, double t_end,
                                 const NoiseModel& noise) {
  return observations_from_csv(read_file(path), t_end, noise);
}

std::string noise_to_json(const NoiseModel& noise) {
  json doc;
  switch (noise.kind) {
    case NoiseModel::Kind::Gaussian:
      doc["type"] = "gaussian";
      doc["variance"] = noise.variance;
      break;
    case NoiseModel::Kind::DiscreteConfusion:
      doc["type"] = "confusion";
      doc["matrices"] = noise.confusion;
      break;
    case NoiseModel::Kind::ErfBasal:
      doc["type"] = "erf_basal";
      doc["mu"] = noise.erf_mu;
      doc["sigma"] = noise.erf_sigma;
      break;
  }
  return doc.dump();
}

NoiseModel noise_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    const std::string type = doc.at("type").get<std::string>();
    if (type == "gaussian") {
      return NoiseModel::gaussian(doc.at("variance").get<double>());
    }
    if (type == "confusion") {
      return NoiseModel::discrete_confusion(
          doc.at("matrices")
              .get<std::vector<std::vector<std::vector<double>>>>());
    }
    if (type == "erf_basal") {
      return NoiseModel::erf_basal(
          doc.at("mu").get<std::vector<double>>(),
          doc.at("sigma").get<std::vector<double>>());
    }
    throw FormatError("unknown noise model type: " + type);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad noise JSON: ") + e.what());
  }
}

std::string stats_to_json(const SufficientStats& stats) {
  json doc = json::array();
  for (const auto& ns : stats.nodes) {
    json m = json::array();
    json t = json::array();
    for (std::size_t u = 0; u < ns.nconfigs; ++u) {
      json mu = json::array();
      json tu = json::array();
      for (int x = 0; x < ns.card; ++x) {
        json row = json::array();
        for (int y = 0; y < ns.card; ++y) row.push_back(ns.M(u, x, y));
        mu.push_back(row);
        tu.push_back(ns.T(u, x));
      }
      m.push_back(mu);
      t.push_back(tu);
    }
    doc.push_back({{"node", ns.node},
                   {"parents", ns.parents},
                   {"M", m},
                   {"T", t}});
  }
  return doc.dump(2);
}

std::string learn_result_to_json(const LearnResult& result) {
  json doc;
  doc["pi"] = json::array();
  for (int i = 0; i < result.pi.num_nodes(); ++i) {
    json node = json::array();
    const auto& nm = result.pi.nodes[i];
    for (std::size_t k = 0; k < nm.subsets.size(); ++k) {
      node.push_back({{"subset", nm.subsets[k]}, {"weight", nm.weights[k]}});
    }
    doc["pi"].push_back(node);
  }
  doc["edge_probs"] = result.edge_probabilities;
  doc["map_graph"] = json::array();
  for (const auto& [from, to] : result.map_graph.edges()) {
    doc["map_graph"].push_back({from, to});
  }
  doc["trace"] = result.objective_trace;
  doc["diagnostics"] = {{"em_iterations", result.em_iterations},
                        {"converged", result.converged},
                        {"low_data", result.low_data},
                        {"flags", result.flags},
                        {"seconds_inference", result.seconds_inference},
                        {"seconds_optimization", result.seconds_optimization}};
  return doc.dump(2);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << content;
}

}  // namespace ctbn
