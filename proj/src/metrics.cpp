#include "wsnloc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wsnloc {

double rmse(std::span<const Vec2> estimates, std::span<const Vec2> truth,
            std::span<const int> node_ids) {
  if (node_ids.empty()) throw std::invalid_argument("rmse: empty node set");
  double sum_sq = 0.0;
  for (int id : node_ids) {
    const Vec2 err = estimates[id] - truth[id];
    sum_sq += err.x * err.x + err.y * err.y;
  }
  return std::sqrt(sum_sq / static_cast<double>(node_ids.size()));
}

double ger(std::span<const Vec2> estimates, std::span<const Vec2> truth,
           std::span<const int> node_ids) {
  const std::size_t n = node_ids.size();
  if (n < 2) throw std::invalid_argument("ger: need at least 2 nodes");
  double sum_sq = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double d_true = distance(truth[node_ids[a]], truth[node_ids[b]]);
      if (d_true == 0.0)
        throw std::invalid_argument("ger: coincident true positions");
      const double d_est = distance(estimates[node_ids[a]], estimates[node_ids[b]]);
      const double rel = (d_est - d_true) / d_true;
      sum_sq += rel * rel;
    }
  }
  const double n_pairs = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
  return std::sqrt(sum_sq) / n_pairs;
}

double gde(std::span<const Vec2> estimates, std::span<const Vec2> truth,
           std::span<const int> node_ids, double comm_range) {
  const std::size_t n = node_ids.size();
  if (n < 2) throw std::invalid_argument("gde: need at least 2 nodes");
  if (!(comm_range > 0.0)) throw std::invalid_argument("gde: comm_range must be positive");
  double sum_sq = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double d_true = distance(truth[node_ids[a]], truth[node_ids[b]]);
      const double d_est = distance(estimates[node_ids[a]], estimates[node_ids[b]]);
      const double err = d_est - d_true;
      sum_sq += err * err;
    }
  }
  const double n_pairs = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
  return std::sqrt(sum_sq / n_pairs) / comm_range;
}

MetricsReport compute_metrics(std::span<const Vec2> estimates, std::span<const Vec2> truth,
                              std::span<const int> rmse_ids, std::span<const int> pair_ids,
                              double comm_range) {
  MetricsReport report;
  report.rmse = rmse(estimates, truth, rmse_ids);
  report.ger = ger(estimates, truth, pair_ids);
  report.gde = gde(estimates, truth, pair_ids, comm_range);
  report.n_trials = 1;
  return report;
}

EcdfTable make_ecdf(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("make_ecdf: empty sample");
  std::sort(values.begin(), values.end());
  EcdfTable table;
  table.probs.resize(values.size());
  const double n = static_cast<double>(values.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    table.probs[k] = static_cast<double>(k + 1) / n;
  table.values = std::move(values);
  return table;
}

double ecdf_at(const EcdfTable& table, double x) {
  const auto it = std::upper_bound(table.values.begin(), table.values.end(), x);
  return static_cast<double>(it - table.values.begin()) /
         static_cast<double>(table.values.size());
}

}  // namespace wsnloc
