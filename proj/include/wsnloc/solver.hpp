#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsnloc/estimators.hpp"
#include "wsnloc/model.hpp"

namespace wsnloc {

enum class InitStrategy : std::uint8_t { UniformRandom, AnchorCentroid, Given };

struct SolverConfig {
  double gamma = 0.01;       // step size
  double epsilon = 1e-3;     // convergence threshold on max position change, m
  int max_iterations = 1000;
  InitStrategy init = InitStrategy::UniformRandom;
  std::vector<Vec2> given_init;   // full node vector, required for Given
  bool record_cost_history = false;  // per-iteration total cost is an extra pass
};

struct SolverState {
  std::vector<Vec2> estimates;  // anchors pinned to truth at every iteration
  int iteration = 0;
  double last_max_delta = 0.0;
};

struct SolverTrace {
  std::vector<double> max_deltas;     // one entry per executed iteration
  std::vector<double> costs;          // filled when record_cost_history is set
  std::uint64_t messages_sent = 0;    // broadcasts received: sum_i |S_i| per round
  std::uint64_t gradient_evals = 0;   // gradient terms evaluated, same shape
  bool converged = false;
  int iterations_used = 0;
  std::uint64_t coincident_events = 0;
};

struct SolverRun {
  std::vector<Vec2> estimates;
  SolverTrace trace;
};

// Raised when an estimate escapes 100x the area diagonal; carries the
// iteration and step size that produced it.
class SolverDiverged : public std::runtime_error {
 public:
  SolverDiverged(int iteration, double gamma);
  int iteration() const { return iteration_; }
  double gamma() const { return gamma_; }

 private:
  int iteration_;
  double gamma_;
};

// Anchors at truth; sensors per strategy. Given requires a full-size vector
// in config-order (anchor entries are overwritten with truth).
std::vector<Vec2> init_positions(const Network& network, InitStrategy strategy,
                                 std::uint64_t seed,
                                 const std::vector<Vec2>& given = {});

// One synchronous (Jacobi) round: every sensor moves against the gradient of
// its neighborhood cost evaluated at the previous iterate. `ranges` is
// aligned with network.links.
SolverState solver_step(const SolverState& state, const Network& network,
                        std::span<const double> ranges, const EstimatorSpec& spec,
                        const SolverConfig& config,
                        std::uint64_t* coincident_counter = nullptr);

// Iterates solver_step until max position change <= epsilon or the iteration
// budget is exhausted. Throws SolverDiverged past the runaway guard.
SolverRun run_solver(const Network& network, std::span<const double> ranges,
                     const EstimatorSpec& spec, const SolverConfig& config,
                     std::uint64_t seed);

}  // namespace wsnloc
