#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "wsnloc/dataio.hpp"
#include "wsnloc/harness.hpp"

namespace {

using namespace wsnloc;

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDivergenceCap = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "results";
  std::vector<std::string> algos;
  std::vector<double> nlos;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> jobs;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_scenario_overrides = true) {
  cmd->add_option("--config", opt.config_path, "scenario config file")->required();
  cmd->add_option("--out", opt.out_dir, "output directory (default: results)");
  cmd->add_option("--seed", opt.seed, "override master_seed");
  cmd->add_option("--trials", opt.trials, "override n_trials");
  cmd->add_option("--jobs", opt.jobs, "trial worker threads (0 = hardware)");
  cmd->add_flag("-v,--verbose", opt.verbose, "chatty progress on stderr");
  if (with_scenario_overrides) {
    cmd->add_option("--algos", opt.algos, "algorithm filter (comma separated)")
        ->delimiter(',');
    cmd->add_option("--nlos", opt.nlos, "NLOS ratios to run (comma separated)")
        ->delimiter(',');
  }
}

ScenarioConfig make_config(const CommonOptions& opt) {
  ScenarioConfig cfg = load_config(opt.config_path);
  if (opt.seed) cfg.master_seed = *opt.seed;
  if (opt.trials) cfg.n_trials = *opt.trials;
  if (opt.jobs) cfg.jobs = *opt.jobs;
  if (!opt.algos.empty()) cfg.algorithms = opt.algos;
  if (!opt.nlos.empty()) cfg.nlos_ratios = opt.nlos;
  validate_config(cfg);
  return cfg;
}

void print_summary(const ScenarioResult& result) {
  for (const AggregateStats& s : result.aggregates) {
    std::printf("algo=%s nlos=%s trials=%d diverged=%d mean_rmse=%s mean_ger=%s mean_gde=%s\n",
                std::string(algorithm_name(s.algorithm)).c_str(),
                format_double(result.nlos_ratio).c_str(), s.trials_used, s.diverged,
                format_double(s.mean_rmse).c_str(), format_double(s.mean_ger).c_str(),
                format_double(s.mean_gde).c_str());
  }
}

void collect_rows(const ScenarioResult& result, std::vector<MetricsRow>& rows,
                  std::vector<NamedEcdf>& ecdfs) {
  for (const TrialResult& t : result.trials)
    rows.push_back({std::string(algorithm_name(t.algorithm)), t.nlos_ratio, t.trial, t.rmse,
                    t.ger, t.gde});
  for (const NamedEcdf& e : result.rmse_ecdfs) ecdfs.push_back(e);
}

int cmd_simulate(const CommonOptions& opt) {
  ScenarioConfig cfg = make_config(opt);
  if (!opt.nlos.empty()) cfg.nlos_ratio = opt.nlos.front();
  const AlgorithmId algo = parse_algorithm(cfg.algorithms.front());

  const TrialSeeds seeds = derive_trial_seeds(cfg.master_seed, 0, cfg.fixed_topology);
  const Realization real = make_realization(cfg, seeds);
  if (opt.verbose)
    std::cerr << "simulate: " << real.network.n_sensors << " sensors, "
              << real.network.links.size() << " links\n";

  const AlgorithmRun run = run_algorithm(algo, real.network, real.measurements, cfg,
                                         seeds.init, seeds.bootstrap, true);

  std::vector<MetricsRow> rows{{std::string(algorithm_name(algo)), cfg.nlos_ratio, 0,
                                run.result.rmse, run.result.ger, run.result.gde}};
  std::vector<NamedTrace> traces;
  for (const auto& [label, trace] : run.stage_traces)
    traces.push_back({label, cfg.nlos_ratio, 0, trace});
  export_results(rows, {}, traces, opt.out_dir);
  export_estimates(real.network, run.estimates,
                   std::filesystem::path(opt.out_dir) / "estimates.csv");

  std::printf("algo=%s nlos=%s trials=1 diverged=0 mean_rmse=%s mean_ger=%s mean_gde=%s\n",
              std::string(algorithm_name(algo)).c_str(),
              format_double(cfg.nlos_ratio).c_str(), format_double(run.result.rmse).c_str(),
              format_double(run.result.ger).c_str(), format_double(run.result.gde).c_str());
  return 0;
}

int cmd_compare(const CommonOptions& opt) {
  ScenarioConfig cfg = make_config(opt);
  std::vector<MetricsRow> rows;
  std::vector<NamedEcdf> ecdfs;
  for (double ratio : cfg.nlos_ratios) {
    ScenarioConfig run_cfg = cfg;
    run_cfg.nlos_ratio = ratio;
    if (opt.verbose) std::cerr << "compare: running nlos=" << ratio << "\n";
    const ScenarioResult result = run_scenario(run_cfg);
    print_summary(result);
    collect_rows(result, rows, ecdfs);
  }
  export_results(rows, ecdfs, {}, opt.out_dir);
  return 0;
}

int cmd_sweep(const CommonOptions& opt, const std::vector<int>& sizes) {
  ScenarioConfig cfg = make_config(opt);
  if (!opt.nlos.empty()) cfg.nlos_ratio = opt.nlos.front();
  const SweepResult result = sample_size_sweep(cfg, sizes);
  for (const SweepSizeStats& s : result.stats)
    std::printf("algo=stage1_bootstrap nlos=%s samples_per_link=%d trials=%d diverged=%d mean_rmse=%s\n",
                format_double(cfg.nlos_ratio).c_str(), s.samples_per_link, s.trials_used,
                s.diverged, format_double(s.mean_rmse).c_str());
  export_sweep(result.rows, result.ecdfs, opt.out_dir);
  return 0;
}

int cmd_validate(const CommonOptions& opt, const std::string& nodes_path,
                 const std::string& ranges_path) {
  ScenarioConfig cfg = make_config(opt);
  const LoadedDataset dataset = load_dataset(nodes_path, ranges_path);
  for (const std::string& w : dataset.warnings) std::cerr << "warning: " << w << "\n";
  if (opt.verbose)
    std::cerr << "validate: " << dataset.network.n_sensors << " sensors, "
              << dataset.network.n_anchors << " anchors, " << dataset.network.links.size()
              << " links, L=" << dataset.measurements.samples_per_link << "\n";

  const ScenarioResult result = run_external(cfg, dataset.network, dataset.measurements);
  print_summary(result);

  std::vector<MetricsRow> rows;
  std::vector<NamedEcdf> ecdfs;
  collect_rows(result, rows, ecdfs);
  export_results(rows, ecdfs, {}, opt.out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative WSN localization: two-step Huber/bootstrap estimators"};
  app.require_subcommand(1);

  CommonOptions sim_opt, cmp_opt, swp_opt, val_opt;
  std::vector<int> sizes{3, 5, 10, 20};
  std::string nodes_path, ranges_path;

  CLI::App* sim = app.add_subcommand("simulate", "one algorithm, one realization, full trace");
  add_common(sim, sim_opt);
  CLI::App* cmp = app.add_subcommand("compare", "all algorithms across NLOS ratios");
  add_common(cmp, cmp_opt);
  CLI::App* swp = app.add_subcommand("sweep", "bootstrap sample-size sweep");
  add_common(swp, swp_opt);
  swp->add_option("--sizes", sizes, "bootstrap sample sizes")->delimiter(',');
  CLI::App* val = app.add_subcommand("validate", "run on an external measured dataset");
  add_common(val, val_opt);
  val->add_option("--nodes", nodes_path, "node table CSV (id,role,x,y)")->required();
  val->add_option("--ranges", ranges_path, "range table CSV (i,j,l,range_m)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e);
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_opt);
    if (cmp->parsed()) return cmd_compare(cmp_opt);
    if (swp->parsed()) return cmd_sweep(swp_opt, sizes);
    if (val->parsed()) return cmd_validate(val_opt, nodes_path, ranges_path);
  } catch (const DivergenceCapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDivergenceCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
