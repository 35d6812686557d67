#include "wsnloc/bootstrap.hpp"

#include <stdexcept>

#include "wsnloc/rng.hpp"

namespace wsnloc {

ResidualSet compute_residuals(std::span<const Vec2> estimates, const MeasurementSet& ms) {
  ResidualSet rs;
  rs.samples_per_link = ms.samples_per_link;
  rs.links = ms.links;
  rs.residuals.resize(ms.ranges.size());
  for (std::size_t k = 0; k < ms.links.size(); ++k) {
    const Link& link = ms.links[k];
    const double est_dist = distance(estimates[link.a], estimates[link.b]);
    for (int l = 0; l < ms.samples_per_link; ++l) {
      const std::size_t idx = k * static_cast<std::size_t>(ms.samples_per_link) + l;
      rs.residuals[idx] = ms.ranges[idx] - est_dist;
    }
  }
  return rs;
}

double resample_mean(std::span<const double> residuals, int n_resample,
                     std::uint64_t seed) {
  if (residuals.empty())
    throw std::invalid_argument("resample_mean: empty residual list");
  if (n_resample < 1)
    throw std::invalid_argument("resample_mean: n_resample must be >= 1");

  Rng rng = make_rng(mix_seed(seed, 0x62747374ULL));  // bootstrap stream
  std::uniform_int_distribution<std::size_t> pick(0, residuals.size() - 1);
  double sum = 0.0;
  for (int n = 0; n < n_resample; ++n) sum += residuals[pick(rng)];
  return sum / n_resample;
}

RefinedRanges refine_ranges(std::span<const Vec2> estimates, const Network& network,
                            const ResidualSet& rs, const BootstrapConfig& cfg) {
  if (rs.links.size() != network.links.size())
    throw std::invalid_argument("refine_ranges: residual set must cover every link");

  RefinedRanges refined(rs.links.size());
  for (std::size_t k = 0; k < rs.links.size(); ++k) {
    const Link& link = rs.links[k];
    const double est_dist = distance(estimates[link.a], estimates[link.b]);
    const double e_star =
        resample_mean(rs.link_residuals(static_cast<int>(k)), cfg.n_resample,
                      mix_seed(cfg.seed, pair_key(link.a, link.b)));
    refined[k] = est_dist + e_star;
  }
  return refined;
}

Stage2Run run_stage2(const Network& network, const MeasurementSet& ms,
                     const std::vector<Vec2>& stage1_estimates,
                     const EstimatorSpec& spec, const SolverConfig& solver_cfg,
                     const BootstrapConfig& cfg) {
  if (cfg.samples_per_link != ms.samples_per_link)
    throw std::invalid_argument(
        "run_stage2: cfg.samples_per_link disagrees with the measurement set");

  const ResidualSet rs = compute_residuals(stage1_estimates, ms);

  Stage2Run out;
  out.refined_ranges = refine_ranges(stage1_estimates, network, rs, cfg);
  out.exchange_messages = static_cast<std::uint64_t>(ms.samples_per_link) *
                          network.sensor_degree_sum();

  SolverConfig rerun_cfg = solver_cfg;
  rerun_cfg.init = InitStrategy::Given;
  rerun_cfg.given_init = stage1_estimates;
  SolverRun rerun = run_solver(network, out.refined_ranges, spec, rerun_cfg, cfg.seed);
  out.estimates = std::move(rerun.estimates);
  out.rerun_trace = std::move(rerun.trace);
  return out;
}

}  // namespace wsnloc
