#include "wsnloc/ranging.hpp"

#include <stdexcept>

#include "wsnloc/rng.hpp"

namespace wsnloc {

MeasurementSet measure(const Network& network, const std::vector<LinkCondition>& conditions,
                       const NoiseModel& model, int samples_per_link, std::uint64_t seed,
                       bool fresh_bias_per_sample) {
  if (samples_per_link < 1)
    throw std::invalid_argument("measure: samples_per_link must be >= 1");
  if (conditions.size() != network.links.size())
    throw std::invalid_argument("measure: conditions must cover every link");
  if (network.links.empty())
    throw std::invalid_argument("measure: network has no links to measure");
  if (!(model.sigma > 0.0))
    throw std::invalid_argument("measure: sigma must be positive");
  if (!(model.nlos_bias_mean > 0.0))
    throw std::invalid_argument("measure: nlos_bias_mean must be positive");

  MeasurementSet ms;
  ms.samples_per_link = samples_per_link;
  ms.links = network.links;
  ms.conditions = conditions;
  ms.ranges.resize(network.links.size() * static_cast<std::size_t>(samples_per_link));

  for (std::size_t k = 0; k < network.links.size(); ++k) {
    const Link& link = network.links[k];
    const double d = distance(network.positions[link.a], network.positions[link.b]);
    const bool nlos = conditions[k] == LinkCondition::Nlos;

    Rng rng = make_rng(mix_seed(seed, pair_key(link.a, link.b)));
    std::normal_distribution<double> noise(0.0, model.sigma);
    std::exponential_distribution<double> bias(1.0 / model.nlos_bias_mean);

    double shared_bias = 0.0;
    if (nlos && !fresh_bias_per_sample) shared_bias = bias(rng);

    for (int l = 0; l < samples_per_link; ++l) {
      double r = d + noise(rng);
      if (nlos) r += fresh_bias_per_sample ? bias(rng) : shared_bias;
      ms.ranges[k * static_cast<std::size_t>(samples_per_link) + l] = r;
    }
  }
  return ms;
}

std::vector<double> first_sample_view(const MeasurementSet& ms) {
  if (ms.samples_per_link < 1)
    throw std::invalid_argument("first_sample_view: empty measurement set");
  std::vector<double> out(ms.links.size());
  for (std::size_t k = 0; k < ms.links.size(); ++k)
    out[k] = ms.range(static_cast<int>(k), 0);
  return out;
}

}  // namespace wsnloc
