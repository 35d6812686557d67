#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "wsnloc/metrics.hpp"
#include "wsnloc/ranging.hpp"
#include "wsnloc/solver.hpp"

using namespace wsnloc;

namespace {

std::vector<double> exact_ranges(const Network& net) {
  std::vector<double> out(net.links.size());
  for (std::size_t k = 0; k < net.links.size(); ++k)
    out[k] = distance(net.positions[net.links[k].a], net.positions[net.links[k].b]);
  return out;
}

Network small_dense_net(int n_sensors, std::uint64_t seed, double comm_range = 6.0) {
  TopologyConfig cfg;
  cfg.n_sensors = n_sensors;
  cfg.comm_range = comm_range;
  return generate_topology(cfg, seed);
}

}  // namespace

TEST_CASE("init strategies") {
  const Network net = small_dense_net(5, 2);

  SUBCASE("anchor centroid of the four corners is (5,5)") {
    const auto est = init_positions(net, InitStrategy::AnchorCentroid, 0);
    for (int i = 0; i < net.n_sensors; ++i) {
      CHECK(est[i].x == doctest::Approx(5.0));
      CHECK(est[i].y == doctest::Approx(5.0));
    }
  }
  SUBCASE("given ground truth stays ground truth") {
    const auto est = init_positions(net, InitStrategy::Given, 0, net.positions);
    CHECK(est == net.positions);
  }
  SUBCASE("uniform random is reproducible and in the area") {
    const auto a = init_positions(net, InitStrategy::UniformRandom, 42);
    const auto b = init_positions(net, InitStrategy::UniformRandom, 42);
    CHECK(a == b);
    for (int i = 0; i < net.n_sensors; ++i) {
      CHECK(a[i].x >= 0.0);
      CHECK(a[i].x <= net.area_length);
    }
    const auto c = init_positions(net, InitStrategy::UniformRandom, 43);
    CHECK(a != c);
  }
  SUBCASE("anchors pinned to truth under every strategy") {
    for (auto strategy : {InitStrategy::UniformRandom, InitStrategy::AnchorCentroid}) {
      const auto est = init_positions(net, strategy, 7);
      for (int j = net.n_sensors; j < net.n_nodes(); ++j) CHECK(est[j] == net.positions[j]);
    }
  }
  SUBCASE("given with wrong size rejected") {
    CHECK_THROWS_AS(init_positions(net, InitStrategy::Given, 0, {{1, 1}}),
                    std::invalid_argument);
  }
}

TEST_CASE("one hand-computed step: 1 sensor, 2 anchors") {
  TopologyConfig cfg;
  cfg.n_sensors = 1;
  cfg.sensor_positions = {{{4.0, 0.0}}};
  cfg.anchor_positions = {{0, 0}, {8, 0}, {4, 100}};  // third anchor out of range
  cfg.area_length = cfg.area_width = 100.0;
  cfg.comm_range = 5.0;
  const Network net = generate_topology(cfg, 0);
  REQUIRE(net.links.size() == 2);  // sensor-anchor0 and sensor-anchor1

  // Start the sensor at (3.5, 0); ranges say 4.0 to each anchor.
  std::vector<double> ranges(net.links.size());
  ranges[net.link_index(0, 1)] = 4.0;
  ranges[net.link_index(0, 2)] = 4.0;

  const EstimatorSpec spec = EstimatorSpec::huber_relaxed(10.0, 1.0);  // K large
  SolverConfig scfg;
  scfg.gamma = 0.01;
  scfg.init = InitStrategy::Given;
  scfg.given_init = {{3.5, 0.0}, {0, 0}, {8, 0}, {4, 100}};

  // Gradients at (3.5, 0): toward anchor0 e = 3.5-4 < 0 -> zero pull;
  // toward anchor1 e = 4.5-4 = 0.5 -> 2*0.5*(-1,0) = (-1, 0).
  const Vec2 g_total{-1.0, 0.0};
  const Vec2 expected = Vec2{3.5, 0.0} - 0.01 * g_total;

  SolverState state{scfg.given_init, 0, 1e9};
  state.estimates = init_positions(net, InitStrategy::Given, 0, scfg.given_init);
  const SolverState next = solver_step(state, net, ranges, spec, scfg);
  CHECK(next.estimates[0].x == doctest::Approx(expected.x).epsilon(1e-12));
  CHECK(next.estimates[0].y == doctest::Approx(expected.y).epsilon(1e-12));
  CHECK(next.last_max_delta == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(next.iteration == 1);
}

TEST_CASE("sensor with zero neighbors never moves") {
  TopologyConfig cfg;
  cfg.n_sensors = 2;
  cfg.sensor_positions = {{{5.0, 5.0}, {1.0, 1.0}}};
  cfg.anchor_positions = {{0, 0}, {2, 0}, {0, 2}};
  cfg.area_length = cfg.area_width = 10.0;
  cfg.comm_range = 2.1;
  const Network net = generate_topology(cfg, 0);
  REQUIRE(net.neighbors[0].empty());  // sensor at (5,5) sees nobody

  const auto ranges = exact_ranges(net);
  SolverConfig scfg;
  scfg.init = InitStrategy::Given;
  scfg.given_init = net.positions;
  scfg.given_init[0] = {5.0, 5.0};
  scfg.max_iterations = 3;
  const SolverRun run =
      run_solver(net, ranges, EstimatorSpec::huber_relaxed(1.345, 0.5), scfg, 0);
  CHECK(run.estimates[0] == Vec2{5.0, 5.0});
}

TEST_CASE("all non-positive residuals freeze the relaxed kinds") {
  const Network net = small_dense_net(6, 4);
  // Ranges larger than any estimated distance -> every residual negative.
  std::vector<double> ranges(net.links.size(), 100.0);
  SolverConfig scfg;
  scfg.init = InitStrategy::Given;
  scfg.given_init = net.positions;
  scfg.max_iterations = 5;
  const SolverRun run =
      run_solver(net, ranges, EstimatorSpec::huber_relaxed(1.345, 0.5), scfg, 0);
  CHECK(run.estimates == net.positions);
  CHECK(run.trace.converged);
  CHECK(run.trace.iterations_used == 1);  // first step already has zero delta
}

TEST_CASE("noiseless LOS net converges to truth") {
  // Exact ranges leave the one-sided kinds a flat optimum unless every node
  // is surrounded by active constraints; a complete graph over the area
  // provides that, and a perturbed-truth start keeps the symmetric kinds in
  // the global basin.
  const Network net = small_dense_net(10, 8, 15.0);
  REQUIRE(net.links.size() ==
          static_cast<std::size_t>(net.n_nodes() * (net.n_nodes() - 1) / 2));
  const auto ranges = exact_ranges(net);

  SolverConfig scfg;
  scfg.gamma = 0.01;
  scfg.epsilon = 1e-7;
  scfg.max_iterations = 60000;
  scfg.init = InitStrategy::Given;
  scfg.given_init = net.positions;
  std::mt19937_64 jitter_rng(77);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  for (int i = 0; i < net.n_sensors; ++i)
    scfg.given_init[i] += {jitter(jitter_rng), jitter(jitter_rng)};

  const auto sensors = net.sensor_ids();
  for (const EstimatorSpec& spec :
       {EstimatorSpec::huber_relaxed(1.345, 0.5), EstimatorSpec::nls_original()}) {
    const SolverRun run = run_solver(net, ranges, spec, scfg, 99);
    CHECK(run.trace.converged);
    CHECK(rmse(run.estimates, net.positions, sensors) < 0.05);
  }
}

TEST_CASE("anchors never move during a run") {
  const Network net = small_dense_net(8, 3);
  const auto conds = assign_link_conditions(net.links, 0.5, 3);
  const MeasurementSet ms = measure(net, conds, {0.5, 1.0}, 1, 3);
  SolverConfig scfg;
  scfg.max_iterations = 50;
  const SolverRun run = run_solver(net, first_sample_view(ms),
                                   EstimatorSpec::nls_original(), scfg, 12);
  for (int j = net.n_sensors; j < net.n_nodes(); ++j)
    CHECK(run.estimates[j] == net.positions[j]);
}

TEST_CASE("iteration budget edge cases") {
  const Network net = small_dense_net(4, 6);
  const auto ranges = exact_ranges(net);
  SolverConfig scfg;
  scfg.max_iterations = 0;
  CHECK_THROWS_AS(run_solver(net, ranges, EstimatorSpec::nls_original(), scfg, 1),
                  std::invalid_argument);

  scfg.max_iterations = 1;
  const SolverRun run = run_solver(net, ranges, EstimatorSpec::nls_original(), scfg, 1);
  CHECK(run.trace.iterations_used == 1);
  CHECK(run.trace.max_deltas.size() == 1);
}

TEST_CASE("message accounting matches the counting oracle") {
  const Network net = small_dense_net(7, 9);
  const auto conds = assign_link_conditions(net.links, 0.0, 1);
  const MeasurementSet ms = measure(net, conds, {0.5, 1.0}, 1, 4);

  SolverConfig scfg;
  scfg.max_iterations = 17;
  scfg.epsilon = 1e-15;  // force the full budget
  const SolverRun run = run_solver(net, first_sample_view(ms),
                                   EstimatorSpec::huber_relaxed(1.345, 0.5), scfg, 5);

  std::uint64_t degree_sum = 0;
  for (int i = 0; i < net.n_sensors; ++i) degree_sum += net.neighbors[i].size();
  CHECK(run.trace.messages_sent ==
        static_cast<std::uint64_t>(run.trace.iterations_used) * degree_sum);
  CHECK(run.trace.gradient_evals == run.trace.messages_sent);
  CHECK(net.sensor_degree_sum() == degree_sum);
}

TEST_CASE("cost is non-increasing at a quarter of the reference step size") {
  // Descent sanity on noiseless instances; at least 95% of trials monotone.
  int monotone = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const Network net = small_dense_net(10, 100 + static_cast<std::uint64_t>(t));
    const auto ranges = exact_ranges(net);
    SolverConfig scfg;
    scfg.gamma = 0.0025;  // 0.01 / 4
    scfg.max_iterations = 400;
    scfg.record_cost_history = true;
    const SolverRun run =
        run_solver(net, ranges, EstimatorSpec::huber_relaxed(1.345, 0.5), scfg,
                   200 + static_cast<std::uint64_t>(t));
    const bool ok = std::is_sorted(run.trace.costs.rbegin(), run.trace.costs.rend(),
                                   [](double a, double b) { return a < b - 1e-12; });
    monotone += ok ? 1 : 0;
  }
  CHECK(monotone >= 19);
}

TEST_CASE("relabeling sensors relabels the estimates identically") {
  // Swap two sensors in the config; synchronous updates are order-independent.
  TopologyConfig cfg;
  cfg.n_sensors = 4;
  cfg.sensor_positions = {{{2, 2}, {3, 5}, {6, 4}, {5, 7}}};
  cfg.comm_range = 4.0;
  const Network net = generate_topology(cfg, 0);

  TopologyConfig permuted = cfg;
  permuted.sensor_positions = {{{3, 5}, {2, 2}, {6, 4}, {5, 7}}};  // swap 0 and 1
  const Network pnet = generate_topology(permuted, 0);

  auto relabel = [](int id) { return id == 0 ? 1 : id == 1 ? 0 : id; };

  const auto conds = assign_link_conditions(net.links, 0.0, 1);
  const MeasurementSet ms = measure(net, conds, {0.5, 1.0}, 1, 8);
  const auto ranges = first_sample_view(ms);
  std::vector<double> pranges(pnet.links.size());
  for (std::size_t k = 0; k < net.links.size(); ++k) {
    const Link& link = net.links[k];
    pranges[pnet.link_index(relabel(link.a), relabel(link.b))] = ranges[k];
  }

  SolverConfig scfg;
  scfg.init = InitStrategy::Given;
  scfg.max_iterations = 60;
  scfg.given_init = {{1, 1}, {4, 4}, {5, 5}, {6, 6}, {0, 0}, {0, 10}, {10, 10}, {10, 0}};
  SolverConfig pcfg = scfg;
  pcfg.given_init = scfg.given_init;
  std::swap(pcfg.given_init[0], pcfg.given_init[1]);

  const EstimatorSpec spec = EstimatorSpec::huber_relaxed(1.345, 0.5);
  const SolverRun run = run_solver(net, ranges, spec, scfg, 0);
  const SolverRun prun = run_solver(pnet, pranges, spec, pcfg, 0);
  for (int i = 0; i < net.n_nodes(); ++i) CHECK(run.estimates[i] == prun.estimates[relabel(i)]);
}

TEST_CASE("divergence guard names iteration and gamma") {
  const Network net = small_dense_net(6, 13);
  const auto conds = assign_link_conditions(net.links, 0.0, 1);
  const MeasurementSet ms = measure(net, conds, {0.5, 1.0}, 1, 4);
  SolverConfig scfg;
  scfg.gamma = 1e6;  // absurd step size
  scfg.max_iterations = 50;
  try {
    run_solver(net, first_sample_view(ms), EstimatorSpec::nls_original(), scfg, 3);
    FAIL("expected SolverDiverged");
  } catch (const SolverDiverged& e) {
    CHECK(e.gamma() == doctest::Approx(1e6));
    CHECK(e.iteration() >= 1);
    CHECK(std::string(e.what()).find("gamma") != std::string::npos);
  }
}
