#include "wsnloc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wsnloc/rng.hpp"

namespace wsnloc {

namespace {

std::string diverged_message(int iteration, double gamma) {
  return "solver diverged at iteration " + std::to_string(iteration) +
         " with gamma=" + std::to_string(gamma) +
         "; estimate left 100x the area diagonal";
}

// Anchors at the corners span the deployment area, so the bounding box of the
// ground-truth positions recovers the area diagonal.
double area_diagonal(const Network& network) {
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = max_x;
  for (const Vec2& p : network.positions) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  return std::hypot(max_x - min_x, max_y - min_y);
}

}  // namespace

SolverDiverged::SolverDiverged(int iteration, double gamma)
    : std::runtime_error(diverged_message(iteration, gamma)),
      iteration_(iteration),
      gamma_(gamma) {}

std::vector<Vec2> init_positions(const Network& network, InitStrategy strategy,
                                 std::uint64_t seed, const std::vector<Vec2>& given) {
  const auto n = static_cast<std::size_t>(network.n_nodes());
  std::vector<Vec2> est(n);

  switch (strategy) {
    case InitStrategy::UniformRandom: {
      Rng rng = make_rng(mix_seed(seed, 0x696e6974ULL));  // init stream
      std::uniform_real_distribution<double> ux(network.area_origin.x,
                                                network.area_origin.x + network.area_length);
      std::uniform_real_distribution<double> uy(network.area_origin.y,
                                                network.area_origin.y + network.area_width);
      for (int i = 0; i < network.n_sensors; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        est[static_cast<std::size_t>(i)] = {x, y};
      }
      break;
    }
    case InitStrategy::AnchorCentroid: {
      Vec2 centroid{0.0, 0.0};
      for (int j = network.n_sensors; j < network.n_nodes(); ++j)
        centroid += network.positions[static_cast<std::size_t>(j)];
      centroid = (1.0 / network.n_anchors) * centroid;
      for (int i = 0; i < network.n_sensors; ++i)
        est[static_cast<std::size_t>(i)] = centroid;
      break;
    }
    case InitStrategy::Given: {
      if (given.size() != n)
        throw std::invalid_argument(
            "init_positions: Given strategy requires one entry per node");
      est = given;
      break;
    }
  }

  for (int j = network.n_sensors; j < network.n_nodes(); ++j)
    est[static_cast<std::size_t>(j)] = network.positions[static_cast<std::size_t>(j)];
  return est;
}

SolverState solver_step(const SolverState& state, const Network& network,
                        std::span<const double> ranges, const EstimatorSpec& spec,
                        const SolverConfig& config, std::uint64_t* coincident_counter) {
  if (ranges.size() != network.links.size())
    throw std::invalid_argument("solver_step: ranges must cover every link");

  SolverState next;
  next.estimates = state.estimates;
  next.iteration = state.iteration + 1;

  double max_delta = 0.0;
  for (int i = 0; i < network.n_sensors; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    Vec2 grad{0.0, 0.0};
    for (int j : network.neighbors[ui]) {
      const int k = network.link_index(i, j);
      grad += grad_term(spec, state.estimates[ui],
                        state.estimates[static_cast<std::size_t>(j)], ranges[k],
                        coincident_counter);
    }
    next.estimates[ui] = state.estimates[ui] - config.gamma * grad;
    max_delta = std::max(max_delta, (next.estimates[ui] - state.estimates[ui]).norm());
  }
  next.last_max_delta = max_delta;
  return next;
}

SolverRun run_solver(const Network& network, std::span<const double> ranges,
                     const EstimatorSpec& spec, const SolverConfig& config,
                     std::uint64_t seed) {
  if (!(config.gamma > 0.0)) throw std::invalid_argument("run_solver: gamma must be positive");
  if (!(config.epsilon > 0.0))
    throw std::invalid_argument("run_solver: epsilon must be positive");
  if (config.max_iterations < 1)
    throw std::invalid_argument("run_solver: max_iterations must be >= 1");

  const double escape_radius = 100.0 * area_diagonal(network);
  const std::uint64_t round_messages = network.sensor_degree_sum();

  SolverState state;
  state.estimates = init_positions(network, config.init, seed, config.given_init);
  state.iteration = 0;
  state.last_max_delta = std::numeric_limits<double>::infinity();

  SolverRun out;
  out.trace.max_deltas.reserve(static_cast<std::size_t>(config.max_iterations));

  while (state.iteration < config.max_iterations &&
         state.last_max_delta > config.epsilon) {
    state = solver_step(state, network, ranges, spec, config,
                        &out.trace.coincident_events);
    out.trace.messages_sent += round_messages;
    out.trace.gradient_evals += round_messages;
    out.trace.max_deltas.push_back(state.last_max_delta);
    if (config.record_cost_history)
      out.trace.costs.push_back(
          total_cost(spec, state.estimates, ranges, network.links));

    for (int i = 0; i < network.n_sensors; ++i) {
      const Vec2& p = state.estimates[static_cast<std::size_t>(i)];
      if (!std::isfinite(p.x) || !std::isfinite(p.y) ||
          std::abs(p.x) > escape_radius || std::abs(p.y) > escape_radius)
        throw SolverDiverged(state.iteration, config.gamma);
    }
  }

  out.trace.converged = state.last_max_delta <= config.epsilon;
  out.trace.iterations_used = state.iteration;
  out.estimates = std::move(state.estimates);
  return out;
}

}  // namespace wsnloc
