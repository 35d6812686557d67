#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "wsnloc/geometry.hpp"
#include "wsnloc/model.hpp"

namespace wsnloc {

// Huber cut-off K = alpha * sigma. The estimator's sigma normally equals the
// channel noise sigma but can be set independently (e.g. noiseless sanity
// runs where a vanishing K would freeze descent).
struct HuberParams {
  double alpha = 1.345;
  double sigma = 0.5;
  double cutoff() const { return alpha * sigma; }
};

enum class EstimatorKind : std::uint8_t {
  HuberRelaxed,   // 0 for e<=0, e^2 for 0<e<K, 2Ke-K^2 for e>=K
  HuberOriginal,  // e^2 for |e|<K, 2K|e|-K^2 for |e|>=K
  NlsOriginal,    // e^2
  NlsRelaxed,     // 0 for e<=0, e^2 otherwise
};

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::HuberRelaxed;
  HuberParams huber;  // used by the Huber kinds only

  static EstimatorSpec huber_relaxed(double alpha, double sigma) {
    return {EstimatorKind::HuberRelaxed, {alpha, sigma}};
  }
  static EstimatorSpec huber_original(double alpha, double sigma) {
    return {EstimatorKind::HuberOriginal, {alpha, sigma}};
  }
  static EstimatorSpec nls_original() { return {EstimatorKind::NlsOriginal, {}}; }
  static EstimatorSpec nls_relaxed() { return {EstimatorKind::NlsRelaxed, {}}; }
};

// One-sided (relaxed) Huber loss of the residual e = ||theta_i-theta_j|| - r.
double rho_relaxed(double e, double cutoff);

// Classical symmetric Huber loss with the same 2K linear slope, so it
// coincides with rho_relaxed on e >= 0.
double rho_original(double e, double cutoff);

// Loss of a single residual under the given estimator.
double cost_term(const EstimatorSpec& spec, double e);

// Derivative of the loss in e; rho'(e).
double dcost_term(const EstimatorSpec& spec, double e);

// Process-wide count of coincident-position gradient evaluations, where the
// unit direction is undefined and a zero gradient is returned instead.
std::atomic<std::uint64_t>& coincident_gradient_events();

// Partial derivative of cost_term(spec, ||theta_i-theta_j|| - r) with respect
// to theta_i: rho'(e) * (theta_i-theta_j)/||theta_i-theta_j||. A coincident
// pair bumps `coincident_counter` when given, else the process-wide counter.
Vec2 grad_term(const EstimatorSpec& spec, Vec2 theta_i, Vec2 theta_j, double r,
               std::uint64_t* coincident_counter = nullptr);

// Sum of cost_term over all links, each unordered pair counted once.
// `ranges` must be aligned with `links`.
double total_cost(const EstimatorSpec& spec, std::span<const Vec2> positions,
                  std::span<const double> ranges, std::span<const Link> links);

}  // namespace wsnloc
