#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wsnloc/model.hpp"

namespace wsnloc {

// ToA channel model: LOS ranges carry zero-mean Gaussian noise with std dev
// `sigma`; NLOS ranges additionally carry an exponential positive bias whose
// MEAN is `nlos_bias_mean`.
struct NoiseModel {
  double sigma = 0.5;
  double nlos_bias_mean = 1.0;
};

// L range samples per unordered link, stored once per pair (symmetric by
// construction). Conditions are ground truth only; estimators never see them.
struct MeasurementSet {
  int samples_per_link = 0;
  std::vector<Link> links;                  // aligned with the source network
  std::vector<double> ranges;               // row-major [link][sample]
  std::vector<LinkCondition> conditions;    // aligned with links

  double range(int link_idx, int sample) const {
    return ranges[static_cast<std::size_t>(link_idx) * samples_per_link + sample];
  }
  std::span<const double> link_samples(int link_idx) const {
    return {ranges.data() + static_cast<std::size_t>(link_idx) * samples_per_link,
            static_cast<std::size_t>(samples_per_link)};
  }
};

// Draws samples_per_link independent measurements per link. Each link has its
// own generator stream derived from (seed, pair key), so results do not
// depend on link enumeration order. When fresh_bias_per_sample is false, one
// NLOS bias realization is drawn per link and shared by all its samples.
MeasurementSet measure(const Network& network, const std::vector<LinkCondition>& conditions,
                       const NoiseModel& model, int samples_per_link, std::uint64_t seed,
                       bool fresh_bias_per_sample = true);

// First sample of every link, indexed like network.links. Stage I consumes
// one range per link; Stage II consumes all of them.
std::vector<double> first_sample_view(const MeasurementSet& ms);

}  // namespace wsnloc
