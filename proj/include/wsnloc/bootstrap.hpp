#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wsnloc/ranging.hpp"
#include "wsnloc/solver.hpp"

namespace wsnloc {

// Per-link empirical residuals e^l = r^l - ||theta_i - theta_j||, l = 1..L,
// computed against one fixed set of position estimates.
struct ResidualSet {
  int samples_per_link = 0;
  std::vector<Link> links;       // aligned with the measurement set
  std::vector<double> residuals; // row-major [link][sample]

  std::span<const double> link_residuals(int link_idx) const {
    return {residuals.data() + static_cast<std::size_t>(link_idx) * samples_per_link,
            static_cast<std::size_t>(samples_per_link)};
  }
};

struct BootstrapConfig {
  int samples_per_link = 10;
  int n_resample = 1000;
  std::uint64_t seed = 0;
};

// Synthesized ranges r* = ||theta_i - theta_j|| + e*, aligned with links.
using RefinedRanges = std::vector<double>;

ResidualSet compute_residuals(std::span<const Vec2> estimates, const MeasurementSet& ms);

// Mean of n_resample i.i.d. with-replacement draws from the residual list.
double resample_mean(std::span<const double> residuals, int n_resample,
                     std::uint64_t seed);

// One bootstrap-refined range per link. Per-link resampling streams derive
// from (cfg.seed, pair key), independent of link order.
RefinedRanges refine_ranges(std::span<const Vec2> estimates, const Network& network,
                            const ResidualSet& rs, const BootstrapConfig& cfg);

struct Stage2Run {
  std::vector<Vec2> estimates;
  SolverTrace rerun_trace;
  RefinedRanges refined_ranges;
  // Range-sample exchanges needed to build the residual sets:
  // samples_per_link per neighbor per sensor.
  std::uint64_t exchange_messages = 0;
};

// Full Step II: residuals -> per-link bootstrap means -> refined ranges ->
// rerun of Step I from the Stage I estimates.
Stage2Run run_stage2(const Network& network, const MeasurementSet& ms,
                     const std::vector<Vec2>& stage1_estimates,
                     const EstimatorSpec& spec, const SolverConfig& solver_cfg,
                     const BootstrapConfig& cfg);

}  // namespace wsnloc
