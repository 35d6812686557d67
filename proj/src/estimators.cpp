#include "wsnloc/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace wsnloc {

double rho_relaxed(double e, double cutoff) {
  if (e <= 0.0) return 0.0;
  if (e < cutoff) return e * e;
  return 2.0 * cutoff * e - cutoff * cutoff;
}

double rho_original(double e, double cutoff) {
  const double a = std::abs(e);
  if (a < cutoff) return e * e;
  return 2.0 * cutoff * a - cutoff * cutoff;
}

double cost_term(const EstimatorSpec& spec, double e) {
  switch (spec.kind) {
    case EstimatorKind::HuberRelaxed:
      return rho_relaxed(e, spec.huber.cutoff());
    case EstimatorKind::HuberOriginal:
      return rho_original(e, spec.huber.cutoff());
    case EstimatorKind::NlsOriginal:
      return e * e;
    case EstimatorKind::NlsRelaxed:
      return e <= 0.0 ? 0.0 : e * e;
  }
  throw std::logic_error("cost_term: unknown estimator kind");
}

double dcost_term(const EstimatorSpec& spec, double e) {
  switch (spec.kind) {
    case EstimatorKind::HuberRelaxed: {
      const double k = spec.huber.cutoff();
      if (e <= 0.0) return 0.0;
      if (e < k) return 2.0 * e;
      return 2.0 * k;
    }
    case EstimatorKind::HuberOriginal: {
      const double k = spec.huber.cutoff();
      if (std::abs(e) < k) return 2.0 * e;
      return e >= 0.0 ? 2.0 * k : -2.0 * k;
    }
    case EstimatorKind::NlsOriginal:
      return 2.0 * e;
    case EstimatorKind::NlsRelaxed:
      return e <= 0.0 ? 0.0 : 2.0 * e;
  }
  throw std::logic_error("dcost_term: unknown estimator kind");
}

std::atomic<std::uint64_t>& coincident_gradient_events() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

Vec2 grad_term(const EstimatorSpec& spec, Vec2 theta_i, Vec2 theta_j, double r,
               std::uint64_t* coincident_counter) {
  const Vec2 diff = theta_i - theta_j;
  const double dist = diff.norm();
  if (dist == 0.0) {
    // Unit direction undefined; any fixed choice would bias descent.
    if (coincident_counter)
      ++*coincident_counter;
    else
      coincident_gradient_events().fetch_add(1, std::memory_order_relaxed);
    return {0.0, 0.0};
  }
  const double scale = dcost_term(spec, dist - r) / dist;
  return scale * diff;
}

double total_cost(const EstimatorSpec& spec, std::span<const Vec2> positions,
                  std::span<const double> ranges, std::span<const Link> links) {
  if (ranges.size() != links.size())
    throw std::invalid_argument("total_cost: ranges must cover every link");
  double sum = 0.0;
  for (std::size_t k = 0; k < links.size(); ++k) {
    const double e =
        distance(positions[links[k].a], positions[links[k].b]) - ranges[k];
    sum += cost_term(spec, e);
  }
  return sum;
}

}  // namespace wsnloc
