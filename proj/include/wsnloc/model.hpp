#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "wsnloc/geometry.hpp"

namespace wsnloc {

// Unordered communication link between nodes a and b, stored with a < b.
struct Link {
  int a = 0;
  int b = 0;
  friend bool operator==(const Link&, const Link&) = default;
};

enum class LinkCondition : std::uint8_t { Los, Nlos };

// Node indexing convention: sensors occupy 0..n_sensors-1, anchors
// n_sensors..n_sensors+n_anchors-1. Anchor positions are ground truth and
// never updated by solvers.
struct Network {
  int n_sensors = 0;
  int n_anchors = 0;
  Vec2 area_origin{0.0, 0.0};  // lower-left corner of the deployment area
  double area_length = 0.0;    // extent in x, meters
  double area_width = 0.0;     // extent in y, meters
  double comm_range = 0.0;     // 0 marks presence-based adjacency (external data)
  std::vector<Vec2> positions;             // ground truth, sensors first
  std::vector<Link> links;                 // lexicographically sorted, a < b
  std::vector<std::vector<int>> neighbors; // neighbors[i] sorted ascending

  int n_nodes() const { return n_sensors + n_anchors; }
  bool is_sensor(int id) const { return id >= 0 && id < n_sensors; }
  bool is_anchor(int id) const { return id >= n_sensors && id < n_nodes(); }

  // Index into `links` for the unordered pair (i, j), or -1 if not adjacent.
  int link_index(int i, int j) const;

  std::vector<int> sensor_ids() const;
  std::vector<int> all_node_ids() const;

  // Sum over sensor nodes of their neighbor counts. One gradient-descent
  // round costs this many received broadcasts and this many gradient terms.
  std::uint64_t sensor_degree_sum() const;

  // Sensors with no neighbor at all; they can never update their estimate.
  std::vector<int> isolated_sensors() const;

  void rebuild_link_index();

 private:
  std::unordered_map<std::uint64_t, int> link_lookup_;
};

struct AdjacencyResult {
  std::vector<Link> links;
  std::vector<std::vector<int>> neighbors;
};

// All pairs at true distance <= comm_range become links (ties included).
AdjacencyResult build_adjacency(const std::vector<Vec2>& positions, double comm_range);

struct TopologyConfig {
  int n_sensors = 50;
  std::vector<Vec2> anchor_positions = {{0, 0}, {0, 10}, {10, 10}, {10, 0}};
  double area_length = 10.0;
  double area_width = 10.0;
  double comm_range = 3.0;
  // When set, sensors are placed at these positions instead of being drawn
  // uniformly at random; size must equal n_sensors.
  std::optional<std::vector<Vec2>> sensor_positions;
};

// Anchors at the configured positions, sensors i.i.d. uniform over the area
// (or explicit), adjacency per build_adjacency. Deterministic given seed.
Network generate_topology(const TopologyConfig& config, std::uint64_t seed);

// Marks round(nlos_ratio * |links|) uniformly chosen links as NLOS.
std::vector<LinkCondition> assign_link_conditions(const std::vector<Link>& links,
                                                  double nlos_ratio, std::uint64_t seed);

}  // namespace wsnloc
