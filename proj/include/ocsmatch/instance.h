#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ocsmatch {

struct Edge {
  int offline;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted bipartite graph with a fixed online arrival order. Missing edges
/// have weight zero.
struct Instance {
  std::string name;
  int n_offline = 0;
  std::vector<std::vector<Edge>> arrivals;
  std::string generator;
  std::uint64_t seed = 0;

  int n_online() const { return static_cast<int>(arrivals.size()); }

  /// Throws std::invalid_argument on out-of-range ids, repeated ids within an
  /// arrival, or weights that are negative or not finite.
  void validate() const;

  /// True when every listed edge has weight 0 or 1.
  bool is_unweighted() const;

  /// Weights of arrival j indexed by offline vertex.
  std::vector<double> dense_weights(int j) const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Instance document: {name, n_offline, arrivals: [[[i, w], ...], ...]} with
/// optional generator/seed metadata.
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

Instance read_instance(const std::string& path);
void write_instance(const Instance& instance, const std::string& path);

}  // namespace ocsmatch
