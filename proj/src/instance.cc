#include "ocsmatch/instance.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ocsmatch {

void Instance::validate() const {
  if (n_offline < 0) throw std::invalid_argument("negative offline count");
  std::vector<int> seen(n_offline, -1);
  for (int j = 0; j < n_online(); ++j) {
    for (const Edge& e : arrivals[j]) {
      if (e.offline < 0 || e.offline >= n_offline) {
        throw std::invalid_argument("arrival " + std::to_string(j) +
                                    ": offline id " +
                                    std::to_string(e.offline) + " out of range");
      }
      if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
        throw std::invalid_argument("arrival " + std::to_string(j) +
                                    ": weight must be finite and nonnegative");
      }
      if (seen[e.offline] == j) {
        throw std::invalid_argument("arrival " + std::to_string(j) +
                                    ": offline id " +
                                    std::to_string(e.offline) + " repeated");
      }
      seen[e.offline] = j;
    }
  }
}

bool Instance::is_unweighted() const {
  for (const auto& arrival : arrivals) {
    for (const Edge& e : arrival) {
      if (e.weight != 0.0 && e.weight != 1.0) return false;
    }
  }
  return true;
}

std::vector<double> Instance::dense_weights(int j) const {
  std::vector<double> w(n_offline, 0.0);
  for (const Edge& e : arrivals.at(j)) w[e.offline] = e.weight;
  return w;
}

std::string instance_to_json(const Instance& instance) {
  nlohmann::json arrivals = nlohmann::json::array();
  for (const auto& arrival : instance.arrivals) {
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge& e : arrival) edges.push_back({e.offline, e.weight});
    arrivals.push_back(std::move(edges));
  }
  nlohmann::json doc;
  doc["name"] = instance.name;
  doc["n_offline"] = instance.n_offline;
  if (!instance.generator.empty()) {
    doc["generator"] = instance.generator;
    doc["seed"] = instance.seed;
  }
  doc["arrivals"] = std::move(arrivals);
  return doc.dump() + "\n";
}

Instance instance_from_json(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  Instance instance;
  instance.name = doc.value("name", "");
  instance.n_offline = doc.at("n_offline").get<int>();
  instance.generator = doc.value("generator", "");
  instance.seed = doc.value("seed", std::uint64_t{0});
  for (const auto& arrival : doc.at("arrivals")) {
    std::vector<Edge> edges;
    for (const auto& e : arrival) {
      if (!e.is_array() || e.size() != 2) {
        throw std::invalid_argument("edge must be an [offline, weight] pair");
      }
      edges.push_back({e[0].get<int>(), e[1].get<double>()});
    }
    instance.arrivals.push_back(std::move(edges));
  }
  instance.validate();
  return instance;
}

Instance read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str());
}

void write_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write instance '" + path + "'");
  out << instance_to_json(instance);
}

}  // namespace ocsmatch
