#include "wsnloc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <thread>

#include "wsnloc/rng.hpp"
#include "wsnloc/solver.hpp"

namespace wsnloc {

namespace {

// Stream tags for per-trial seed derivation.
enum SeedStream : std::uint64_t {
  kTopology = 1,
  kConditions = 2,
  kMeasurement = 3,
  kInit = 4,
  kBootstrap = 5,
};

constexpr int kMaxGammaHalvings = 4;
constexpr int kMaxTopologyAttempts = 100;
constexpr double kDivergenceCap = 0.05;

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min(jobs, n));

  if (jobs == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<AlgorithmId> configured_algorithms(const ScenarioConfig& config) {
  std::vector<AlgorithmId> out;
  out.reserve(config.algorithms.size());
  for (const std::string& name : config.algorithms) out.push_back(parse_algorithm(name));
  return out;
}

SolverConfig base_solver_config(const ScenarioConfig& config) {
  SolverConfig s;
  s.gamma = config.gamma;
  s.epsilon = config.epsilon;
  s.max_iterations = config.max_iterations;
  s.init = config.init_strategy;
  return s;
}

struct TrialOutcome {
  std::vector<std::optional<TrialResult>> per_algorithm;  // nullopt = diverged
};

TrialOutcome run_trial_algorithms(const std::vector<AlgorithmId>& algos,
                                  const Network& network, const MeasurementSet& ms,
                                  const ScenarioConfig& config, int trial,
                                  const TrialSeeds& seeds) {
  TrialOutcome outcome;
  outcome.per_algorithm.resize(algos.size());
  for (std::size_t a = 0; a < algos.size(); ++a) {
    try {
      AlgorithmRun run =
          run_algorithm(algos[a], network, ms, config, seeds.init, seeds.bootstrap);
      run.result.trial = trial;
      run.result.nlos_ratio = config.nlos_ratio;
      outcome.per_algorithm[a] = run.result;
    } catch (const SolverDiverged&) {
      outcome.per_algorithm[a] = std::nullopt;
    }
  }
  return outcome;
}

ScenarioResult aggregate_outcomes(const std::vector<AlgorithmId>& algos,
                                  std::vector<TrialOutcome> outcomes, double nlos_ratio) {
  ScenarioResult result;
  result.nlos_ratio = nlos_ratio;

  for (const TrialOutcome& outcome : outcomes)
    for (const auto& maybe : outcome.per_algorithm)
      if (maybe) result.trials.push_back(*maybe);

  for (std::size_t a = 0; a < algos.size(); ++a) {
    AggregateStats stats;
    stats.algorithm = algos[a];
    double sq_rmse_sum = 0.0, ger_sum = 0.0, gde_sum = 0.0;
    std::vector<double> rmse_values;
    for (const TrialOutcome& outcome : outcomes) {
      const auto& maybe = outcome.per_algorithm[a];
      if (!maybe) {
        ++stats.diverged;
        continue;
      }
      sq_rmse_sum += maybe->rmse * maybe->rmse;
      ger_sum += maybe->ger;
      gde_sum += maybe->gde;
      rmse_values.push_back(maybe->rmse);
      ++stats.trials_used;
    }
    if (stats.diverged >
        static_cast<int>(kDivergenceCap * static_cast<double>(outcomes.size())))
      throw DivergenceCapExceeded(
          "algorithm '" + std::string(algorithm_name(algos[a])) + "' diverged in " +
          std::to_string(stats.diverged) + " of " + std::to_string(outcomes.size()) +
          " trials (cap 5%)");
    if (stats.trials_used > 0) {
      stats.mean_rmse = std::sqrt(sq_rmse_sum / stats.trials_used);
      stats.mean_ger = ger_sum / stats.trials_used;
      stats.mean_gde = gde_sum / stats.trials_used;
    }
    result.aggregates.push_back(stats);
    if (!rmse_values.empty())
      result.rmse_ecdfs.push_back({std::string(algorithm_name(algos[a])), nlos_ratio,
                                   make_ecdf(std::move(rmse_values))});
  }
  return result;
}

}  // namespace

AlgorithmId parse_algorithm(std::string_view name) {
  if (name == "stage1") return AlgorithmId::StageI;
  if (name == "stage1_stage2") return AlgorithmId::StageIStageII;
  if (name == "nls_original") return AlgorithmId::NlsOriginal;
  if (name == "nls_relaxed") return AlgorithmId::NlsRelaxed;
  if (name == "stage1_bootstrap") return AlgorithmId::StageIBootstrap;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

std::string_view algorithm_name(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::StageI: return "stage1";
    case AlgorithmId::StageIStageII: return "stage1_stage2";
    case AlgorithmId::NlsOriginal: return "nls_original";
    case AlgorithmId::NlsRelaxed: return "nls_relaxed";
    case AlgorithmId::StageIBootstrap: return "stage1_bootstrap";
  }
  throw std::logic_error("algorithm_name: unknown id");
}

TrialSeeds derive_trial_seeds(std::uint64_t master_seed, int trial, bool fixed_topology) {
  const auto t = static_cast<std::uint64_t>(trial);
  TrialSeeds seeds;
  seeds.topology = mix_seed(master_seed, fixed_topology ? 0 : t, kTopology);
  seeds.conditions = mix_seed(master_seed, t, kConditions);
  seeds.measurement = mix_seed(master_seed, t, kMeasurement);
  seeds.init = mix_seed(master_seed, t, kInit);
  seeds.bootstrap = mix_seed(master_seed, t, kBootstrap);
  return seeds;
}

Realization make_realization(const ScenarioConfig& config, const TrialSeeds& seeds) {
  Realization r;
  const TopologyConfig topo = config.topology();
  for (int attempt = 0;; ++attempt) {
    r.network = generate_topology(topo, mix_seed(seeds.topology, attempt));
    if (!config.resample_isolated || r.network.isolated_sensors().empty()) break;
    if (attempt + 1 >= kMaxTopologyAttempts)
      throw std::runtime_error(
          "make_realization: no topology without isolated sensors after " +
          std::to_string(kMaxTopologyAttempts) + " attempts; grow comm_range or density");
  }
  r.conditions = assign_link_conditions(r.network.links, config.nlos_ratio, seeds.conditions);
  r.measurements =
      measure(r.network, r.conditions, {config.sigma, config.nlos_bias_mean_m},
              config.samples_per_link, seeds.measurement, config.fresh_bias_per_sample);
  return r;
}

AlgorithmRun run_algorithm(AlgorithmId algo, const Network& network,
                           const MeasurementSet& ms, const ScenarioConfig& config,
                           std::uint64_t init_seed, std::uint64_t bootstrap_seed,
                           bool record_history, const std::vector<Vec2>* init_override) {
  const EstimatorSpec relaxed =
      EstimatorSpec::huber_relaxed(config.huber_alpha, config.effective_huber_sigma());
  const EstimatorSpec original =
      EstimatorSpec::huber_original(config.huber_alpha, config.effective_huber_sigma());
  const std::vector<double> stage1_ranges = first_sample_view(ms);
  const std::string name(algorithm_name(algo));

  for (int halvings = 0;; ++halvings) {
    SolverConfig scfg = base_solver_config(config);
    scfg.gamma = config.gamma / static_cast<double>(1 << halvings);
    scfg.record_cost_history = record_history;
    if (init_override) {
      scfg.init = InitStrategy::Given;
      scfg.given_init = *init_override;
    }
    try {
      AlgorithmRun out;
      TrialResult& res = out.result;
      res.algorithm = algo;
      res.gamma_halvings = halvings;

      switch (algo) {
        case AlgorithmId::StageI: {
          SolverRun s1 = run_solver(network, stage1_ranges, relaxed, scfg, init_seed);
          res.iterations_used = s1.trace.iterations_used;
          res.messages_sent = s1.trace.messages_sent;
          if (record_history) out.stage_traces.emplace_back(name, s1.trace);
          out.estimates = std::move(s1.estimates);
          break;
        }
        case AlgorithmId::NlsOriginal:
        case AlgorithmId::NlsRelaxed: {
          const EstimatorSpec spec = algo == AlgorithmId::NlsOriginal
                                         ? EstimatorSpec::nls_original()
                                         : EstimatorSpec::nls_relaxed();
          SolverRun run = run_solver(network, stage1_ranges, spec, scfg, init_seed);
          res.iterations_used = run.trace.iterations_used;
          res.messages_sent = run.trace.messages_sent;
          if (record_history) out.stage_traces.emplace_back(name, run.trace);
          out.estimates = std::move(run.estimates);
          break;
        }
        case AlgorithmId::StageIStageII: {
          SolverRun s1 = run_solver(network, stage1_ranges, relaxed, scfg, init_seed);
          SolverConfig stage2_cfg = scfg;
          stage2_cfg.init = InitStrategy::Given;
          stage2_cfg.given_init = s1.estimates;
          SolverRun s2 = run_solver(network, stage1_ranges, original, stage2_cfg, init_seed);
          res.iterations_used = s1.trace.iterations_used + s2.trace.iterations_used;
          res.messages_sent = s1.trace.messages_sent + s2.trace.messages_sent;
          if (record_history) {
            out.stage_traces.emplace_back(name + "_stage1", s1.trace);
            out.stage_traces.emplace_back(name + "_stage2", s2.trace);
          }
          out.estimates = std::move(s2.estimates);
          break;
        }
        case AlgorithmId::StageIBootstrap: {
          SolverRun s1 = run_solver(network, stage1_ranges, relaxed, scfg, init_seed);
          BootstrapConfig bcfg;
          bcfg.samples_per_link = ms.samples_per_link;
          bcfg.n_resample = config.n_resample;
          bcfg.seed = bootstrap_seed;
          Stage2Run s2 = run_stage2(network, ms, s1.estimates, relaxed, scfg, bcfg);
          res.iterations_used =
              s1.trace.iterations_used + s2.rerun_trace.iterations_used;
          res.messages_sent = s1.trace.messages_sent + s2.exchange_messages +
                              s2.rerun_trace.messages_sent;
          if (record_history) {
            out.stage_traces.emplace_back(name + "_stage1", s1.trace);
            out.stage_traces.emplace_back(name + "_stage2", s2.rerun_trace);
          }
          out.estimates = std::move(s2.estimates);
          break;
        }
      }

      const std::vector<int> sensors = network.sensor_ids();
      const std::vector<int> pair_ids =
          config.include_anchors ? network.all_node_ids() : sensors;
      const MetricsReport report = compute_metrics(out.estimates, network.positions,
                                                   sensors, pair_ids, config.comm_range);
      res.rmse = report.rmse;
      res.ger = report.ger;
      res.gde = report.gde;
      return out;
    } catch (const SolverDiverged&) {
      if (halvings >= kMaxGammaHalvings) throw;
    }
  }
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  validate_config(config);
  if (config.n_sensors < 1)
    throw ConfigError("config key 'n_sensors' out of range: scenarios need >= 1 sensor");
  const std::vector<AlgorithmId> algos = configured_algorithms(config);

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(config.n_trials));
  parallel_for(config.n_trials, config.jobs, [&](int t) {
    const TrialSeeds seeds =
        derive_trial_seeds(config.master_seed, t, config.fixed_topology);
    const Realization real = make_realization(config, seeds);
    outcomes[static_cast<std::size_t>(t)] =
        run_trial_algorithms(algos, real.network, real.measurements, config, t, seeds);
  });

  return aggregate_outcomes(algos, std::move(outcomes), config.nlos_ratio);
}

ScenarioResult run_external(const ScenarioConfig& config, const Network& network,
                            const MeasurementSet& ms) {
  validate_config(config);
  const std::vector<AlgorithmId> algos = configured_algorithms(config);

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(config.n_trials));
  parallel_for(config.n_trials, config.jobs, [&](int t) {
    const TrialSeeds seeds = derive_trial_seeds(config.master_seed, t, false);
    ScenarioConfig trial_cfg = config;
    trial_cfg.nlos_ratio = -1.0;  // unknown for measured campaigns
    outcomes[static_cast<std::size_t>(t)] =
        run_trial_algorithms(algos, network, ms, trial_cfg, t, seeds);
  });

  return aggregate_outcomes(algos, std::move(outcomes), -1.0);
}

SweepResult sample_size_sweep(const ScenarioConfig& config, const std::vector<int>& sizes) {
  validate_config(config);
  if (config.n_sensors < 1)
    throw ConfigError("config key 'n_sensors' out of range: scenarios need >= 1 sensor");
  for (int size : sizes)
    if (size < 1) throw ConfigError("sweep sizes must be >= 1");
  if (sizes.empty()) throw ConfigError("sweep sizes must not be empty");

  struct Cell {
    std::optional<double> rmse, ger, gde;  // nullopt = diverged
  };
  std::vector<std::vector<Cell>> cells(static_cast<std::size_t>(config.n_trials),
                                       std::vector<Cell>(sizes.size()));

  parallel_for(config.n_trials, config.jobs, [&](int t) {
    const TrialSeeds seeds =
        derive_trial_seeds(config.master_seed, t, config.fixed_topology);
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      ScenarioConfig cfg = config;
      cfg.samples_per_link = sizes[s];
      const Realization real = make_realization(cfg, seeds);
      try {
        const AlgorithmRun run =
            run_algorithm(AlgorithmId::StageIBootstrap, real.network, real.measurements,
                          cfg, seeds.init, seeds.bootstrap);
        cells[static_cast<std::size_t>(t)][s] =
            Cell{run.result.rmse, run.result.ger, run.result.gde};
      } catch (const SolverDiverged&) {
        cells[static_cast<std::size_t>(t)][s] = Cell{};
      }
    }
  });

  SweepResult result;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    SweepSizeStats stats;
    stats.samples_per_link = sizes[s];
    double sq_sum = 0.0;
    std::vector<double> rmse_values;
    for (int t = 0; t < config.n_trials; ++t) {
      const Cell& cell = cells[static_cast<std::size_t>(t)][s];
      if (!cell.rmse) {
        ++stats.diverged;
        continue;
      }
      result.rows.push_back({sizes[s], t, *cell.rmse, *cell.ger, *cell.gde});
      sq_sum += *cell.rmse * *cell.rmse;
      rmse_values.push_back(*cell.rmse);
      ++stats.trials_used;
    }
    if (stats.diverged >
        static_cast<int>(kDivergenceCap * static_cast<double>(config.n_trials)))
      throw DivergenceCapExceeded("sample size " + std::to_string(sizes[s]) +
                                  " diverged in " + std::to_string(stats.diverged) + " of " +
                                  std::to_string(config.n_trials) + " trials (cap 5%)");
    if (stats.trials_used > 0) stats.mean_rmse = std::sqrt(sq_sum / stats.trials_used);
    result.stats.push_back(stats);
    if (!rmse_values.empty())
      result.ecdfs.push_back({sizes[s], make_ecdf(std::move(rmse_values))});
  }
  return result;
}

}  // namespace wsnloc
