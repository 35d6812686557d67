#pragma once

#include <span>
#include <vector>

#include "wsnloc/geometry.hpp"

namespace wsnloc {

// Per-trial metrics over one estimate set. The expectation in the RMSE
// definition is realized by the harness, which averages squared errors across
// Monte Carlo trials before taking the root.
struct MetricsReport {
  double rmse = 0.0;
  double ger = 0.0;
  double gde = 0.0;
  int n_trials = 1;
};

// Empirical CDF: P(values[k]) = (k+1)/n over the sorted sample.
struct EcdfTable {
  std::vector<double> values;
  std::vector<double> probs;
};

// Root mean square position error over the given nodes.
double rmse(std::span<const Vec2> estimates, std::span<const Vec2> truth,
            std::span<const int> node_ids);

// Global Energy Ratio: RMS of *relative* pairwise-distance errors with the
// 1/(n(n-1)/2) factor outside the root, exactly as defined.
double ger(std::span<const Vec2> estimates, std::span<const Vec2> truth,
           std::span<const int> node_ids);

// Global Distance Error: RMS pairwise-distance error (the pair count inside
// the root) normalized by the communication range.
double gde(std::span<const Vec2> estimates, std::span<const Vec2> truth,
           std::span<const int> node_ids, double comm_range);

// All three metrics of one trial. RMSE runs over rmse_ids (sensors); GER and
// GDE run over pair_ids, which may include anchors.
MetricsReport compute_metrics(std::span<const Vec2> estimates, std::span<const Vec2> truth,
                              std::span<const int> rmse_ids, std::span<const int> pair_ids,
                              double comm_range);

EcdfTable make_ecdf(std::vector<double> values);

// Fraction of the sample <= x.
double ecdf_at(const EcdfTable& table, double x);

}  // namespace wsnloc
