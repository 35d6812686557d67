#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsnloc/metrics.hpp"
#include "wsnloc/model.hpp"
#include "wsnloc/ranging.hpp"
#include "wsnloc/solver.hpp"

namespace wsnloc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::array<std::string_view, 5> kAlgorithmNames = {
    "stage1", "stage1_stage2", "nls_original", "nls_relaxed", "stage1_bootstrap"};

// Flat key-value scenario description; see docs/config_schema.md for the full
// key reference and defaults. Defaults reproduce the simulation study setup.
struct ScenarioConfig {
  double area_length = 10.0;
  double area_width = 10.0;
  int n_sensors = 50;
  std::vector<Vec2> anchor_positions = {{0, 0}, {0, 10}, {10, 10}, {10, 0}};
  double comm_range = 3.0;
  double sigma = 0.5;
  double nlos_bias_mean_m = 1.0;
  double nlos_ratio = 0.05;
  std::vector<double> nlos_ratios = {0.05, 0.5, 0.95};
  int samples_per_link = 10;
  int n_resample = 1000;
  double huber_alpha = 1.345;
  std::optional<double> huber_sigma;  // estimator sigma; defaults to `sigma`
  double gamma = 0.01;
  double epsilon = 1e-3;
  int max_iterations = 1000;
  int n_trials = 200;
  std::uint64_t master_seed = 1;
  std::vector<std::string> algorithms{kAlgorithmNames.begin(), kAlgorithmNames.end()};
  InitStrategy init_strategy = InitStrategy::UniformRandom;
  bool fresh_bias_per_sample = true;
  bool include_anchors = false;
  bool fixed_topology = false;
  bool resample_isolated = true;
  int jobs = 0;  // trial workers; 0 = hardware concurrency

  double effective_huber_sigma() const { return huber_sigma.value_or(sigma); }
  TopologyConfig topology() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Throws ConfigError naming the offending key.
void validate_config(const ScenarioConfig& config);

ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioConfig& config);
void save_config(const ScenarioConfig& config, const std::filesystem::path& path);

// External measurement campaigns: a node table (`id,role,x,y`) and a range
// table (`i,j,l,range_m`). A link exists iff at least one range entry was
// measured for the pair; mirrored entries are averaged.
struct LoadedDataset {
  Network network;
  MeasurementSet measurements;
  std::vector<std::string> warnings;  // e.g. asymmetric duplicates over 10%
};

LoadedDataset load_dataset(const std::filesystem::path& node_path,
                           const std::filesystem::path& range_path);

void export_dataset(const Network& network, const MeasurementSet& ms,
                    const std::filesystem::path& node_path,
                    const std::filesystem::path& range_path);

struct MetricsRow {
  std::string algorithm;
  double nlos_ratio = 0.0;
  int trial = 0;
  double rmse = 0.0;
  double ger = 0.0;
  double gde = 0.0;
};

struct NamedEcdf {
  std::string algorithm;
  double nlos_ratio = 0.0;
  EcdfTable table;
};

struct NamedTrace {
  std::string algorithm;
  double nlos_ratio = 0.0;
  int trial = 0;
  SolverTrace trace;
};

// Writes metrics.csv, ecdf_<algo>_<ratio>.csv and trace_<algo>_<ratio>_<trial>.csv
// under out_dir; returns the paths written. Identical inputs produce
// byte-identical files.
std::vector<std::filesystem::path> export_results(
    std::span<const MetricsRow> rows, std::span<const NamedEcdf> ecdfs,
    std::span<const NamedTrace> traces, const std::filesystem::path& out_dir);

struct SweepRow {
  int samples_per_link = 0;
  int trial = 0;
  double rmse = 0.0;
  double ger = 0.0;
  double gde = 0.0;
};

struct SweepEcdf {
  int samples_per_link = 0;
  EcdfTable table;
};

std::vector<std::filesystem::path> export_sweep(std::span<const SweepRow> rows,
                                                std::span<const SweepEcdf> ecdfs,
                                                const std::filesystem::path& out_dir);

void export_estimates(const Network& network, std::span<const Vec2> estimates,
                      const std::filesystem::path& path);

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

}  // namespace wsnloc
