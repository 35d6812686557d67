#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "wsnloc/bootstrap.hpp"
#include "wsnloc/dataio.hpp"
#include "wsnloc/metrics.hpp"
#include "wsnloc/model.hpp"
#include "wsnloc/ranging.hpp"

namespace wsnloc {

// The five compared pipelines. StageI is the relaxed Huber descent;
// StageIStageII refines it with the symmetric Huber on the original ranges;
// StageIBootstrap refines it by rerunning on bootstrap-refined ranges.
enum class AlgorithmId : std::uint8_t {
  StageI,
  StageIStageII,
  NlsOriginal,
  NlsRelaxed,
  StageIBootstrap,
};

AlgorithmId parse_algorithm(std::string_view name);
std::string_view algorithm_name(AlgorithmId id);

// More than 5% of trials diverged for some algorithm; silently dropping them
// would fake accuracy.
class DivergenceCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrialResult {
  AlgorithmId algorithm = AlgorithmId::StageI;
  double nlos_ratio = 0.0;
  int trial = 0;
  double rmse = 0.0;
  double ger = 0.0;
  double gde = 0.0;
  int iterations_used = 0;          // summed over stages
  std::uint64_t messages_sent = 0;  // broadcasts + Stage II sample exchanges
  int gamma_halvings = 0;           // successful run after this many retries
};

struct AlgorithmRun {
  std::vector<Vec2> estimates;
  TrialResult result;
  // One trace per solver pass, labelled "<algo>" or "<algo>_stage1/2";
  // populated only when run_algorithm records history.
  std::vector<std::pair<std::string, SolverTrace>> stage_traces;
};

// Seed streams derived from (master_seed, trial); every algorithm of a trial
// shares them, so comparisons are paired.
struct TrialSeeds {
  std::uint64_t topology = 0;
  std::uint64_t conditions = 0;
  std::uint64_t measurement = 0;
  std::uint64_t init = 0;
  std::uint64_t bootstrap = 0;
};

TrialSeeds derive_trial_seeds(std::uint64_t master_seed, int trial, bool fixed_topology);

// One random realization: topology (optionally resampled until no sensor is
// isolated), link conditions, measurements.
struct Realization {
  Network network;
  std::vector<LinkCondition> conditions;
  MeasurementSet measurements;
};

Realization make_realization(const ScenarioConfig& config, const TrialSeeds& seeds);

// Runs one pipeline on one realization. Retries with halved gamma up to four
// times on divergence; rethrows SolverDiverged when all attempts fail.
// record_history additionally keeps per-iteration cost traces per stage.
// init_override, when given, replaces the configured first-stage
// initialization with fixed positions (one per node).
AlgorithmRun run_algorithm(AlgorithmId algo, const Network& network,
                           const MeasurementSet& ms, const ScenarioConfig& config,
                           std::uint64_t init_seed, std::uint64_t bootstrap_seed,
                           bool record_history = false,
                           const std::vector<Vec2>* init_override = nullptr);

struct AggregateStats {
  AlgorithmId algorithm = AlgorithmId::StageI;
  // Root of the across-trial mean of squared per-trial RMSE, i.e. the
  // expectation applied to squared errors before the root.
  double mean_rmse = 0.0;
  double mean_ger = 0.0;
  double mean_gde = 0.0;
  int trials_used = 0;
  int diverged = 0;
};

struct ScenarioResult {
  double nlos_ratio = 0.0;
  std::vector<TrialResult> trials;        // trial-major, algorithms in config order
  std::vector<AggregateStats> aggregates; // algorithms in config order
  std::vector<NamedEcdf> rmse_ecdfs;      // per-trial RMSE, one table per algorithm
};

// Monte Carlo study at config.nlos_ratio: fresh paired realizations per trial
// (or one fixed topology), every configured algorithm on each.
ScenarioResult run_scenario(const ScenarioConfig& config);

// Same study on one externally measured realization; trials vary only the
// random initialization. Reported nlos_ratio is -1 (unknown in the field).
ScenarioResult run_external(const ScenarioConfig& config, const Network& network,
                            const MeasurementSet& ms);

struct SweepSizeStats {
  int samples_per_link = 0;
  double mean_rmse = 0.0;
  int trials_used = 0;
  int diverged = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepEcdf> ecdfs;
  std::vector<SweepSizeStats> stats;
};

// StageIBootstrap at several bootstrap sample sizes with shared trial seeds.
SweepResult sample_size_sweep(const ScenarioConfig& config, const std::vector<int>& sizes);

}  // namespace wsnloc
