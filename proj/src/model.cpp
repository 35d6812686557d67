#include "wsnloc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wsnloc/rng.hpp"

namespace wsnloc {

int Network::link_index(int i, int j) const {
  auto it = link_lookup_.find(pair_key(i, j));
  return it == link_lookup_.end() ? -1 : it->second;
}

std::vector<int> Network::sensor_ids() const {
  std::vector<int> ids(static_cast<std::size_t>(n_sensors));
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

std::vector<int> Network::all_node_ids() const {
  std::vector<int> ids(static_cast<std::size_t>(n_nodes()));
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

std::uint64_t Network::sensor_degree_sum() const {
  std::uint64_t total = 0;
  for (int i = 0; i < n_sensors; ++i) total += neighbors[i].size();
  return total;
}

std::vector<int> Network::isolated_sensors() const {
  std::vector<int> out;
  for (int i = 0; i < n_sensors; ++i)
    if (neighbors[i].empty()) out.push_back(i);
  return out;
}

void Network::rebuild_link_index() {
  link_lookup_.clear();
  link_lookup_.reserve(links.size());
  for (std::size_t k = 0; k < links.size(); ++k)
    link_lookup_[pair_key(links[k].a, links[k].b)] = static_cast<int>(k);
}

AdjacencyResult build_adjacency(const std::vector<Vec2>& positions, double comm_range) {
  if (positions.size() < 2)
    throw std::invalid_argument("build_adjacency: need at least 2 nodes");
  if (!(comm_range > 0.0))
    throw std::invalid_argument("build_adjacency: comm_range must be positive");

  const int n = static_cast<int>(positions.size());
  AdjacencyResult out;
  out.neighbors.resize(positions.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (distance(positions[i], positions[j]) <= comm_range) {
        out.links.push_back({i, j});
        out.neighbors[i].push_back(j);
        out.neighbors[j].push_back(i);
      }
    }
  }
  return out;
}

Network generate_topology(const TopologyConfig& config, std::uint64_t seed) {
  if (config.n_sensors < 0)
    throw std::invalid_argument("generate_topology: n_sensors must be >= 0");
  if (config.anchor_positions.size() < 3)
    throw std::invalid_argument(
        "generate_topology: at least 3 anchors required for 2-D localization");
  if (!(config.area_length > 0.0) || !(config.area_width > 0.0))
    throw std::invalid_argument("generate_topology: area dimensions must be positive");
  if (!(config.comm_range > 0.0))
    throw std::invalid_argument("generate_topology: comm_range must be positive");
  if (config.sensor_positions &&
      static_cast<int>(config.sensor_positions->size()) != config.n_sensors)
    throw std::invalid_argument(
        "generate_topology: sensor_positions size must equal n_sensors");

  Network net;
  net.n_sensors = config.n_sensors;
  net.n_anchors = static_cast<int>(config.anchor_positions.size());
  net.area_length = config.area_length;
  net.area_width = config.area_width;
  net.comm_range = config.comm_range;
  net.positions.reserve(static_cast<std::size_t>(net.n_nodes()));

  if (config.sensor_positions) {
    for (const Vec2& p : *config.sensor_positions) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument("generate_topology: non-finite sensor position");
      net.positions.push_back(p);
    }
  } else {
    Rng rng = make_rng(mix_seed(seed, 0x746f706fULL));  // topology stream
    std::uniform_real_distribution<double> ux(0.0, config.area_length);
    std::uniform_real_distribution<double> uy(0.0, config.area_width);
    for (int i = 0; i < config.n_sensors; ++i) {
      const double x = ux(rng);
      const double y = uy(rng);
      net.positions.push_back({x, y});
    }
  }
  for (const Vec2& p : config.anchor_positions) net.positions.push_back(p);

  auto adj = build_adjacency(net.positions, net.comm_range);
  net.links = std::move(adj.links);
  net.neighbors = std::move(adj.neighbors);
  net.rebuild_link_index();
  return net;
}

std::vector<LinkCondition> assign_link_conditions(const std::vector<Link>& links,
                                                  double nlos_ratio, std::uint64_t seed) {
  if (!(nlos_ratio >= 0.0 && nlos_ratio <= 1.0))
    throw std::invalid_argument("assign_link_conditions: nlos_ratio must be in [0,1]");

  const std::size_t n = links.size();
  std::vector<LinkCondition> conditions(n, LinkCondition::Los);
  const auto n_nlos =
      static_cast<std::size_t>(std::llround(nlos_ratio * static_cast<double>(n)));
  if (n_nlos == 0) return conditions;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(mix_seed(seed, 0x6e6c6f73ULL));  // condition stream
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t k = 0; k < n_nlos; ++k) conditions[order[k]] = LinkCondition::Nlos;
  return conditions;
}

}  // namespace wsnloc
