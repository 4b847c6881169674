#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "brwlab/config.hpp"
#include "brwlab/law.hpp"
#include "brwlab/point_measure.hpp"
#include "brwlab/population.hpp"

namespace brwlab {

/// One summary line of an experiment. `pass` follows from the recorded
/// numbers alone, so replaying the raw files reproduces it.
struct StatReport {
  std::string name;
  std::string test;  // identity | tolerance | ks | trend | summary
  double estimate = 0.0;
  double standard_error = 0.0;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = true;
  std::string detail;
};

bool all_pass(std::span<const StatReport> reports);
void write_reports_json(std::ostream& out, std::span<const StatReport> reports);

/// Raw CSV table; cells are kept as text so round-tripping is exact.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws std::out_of_range
  bool has_column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  std::vector<double> numbers(const std::string& name) const;
  void write_csv(std::ostream& out) const;
  static Table read_csv(const std::filesystem::path& path);
};

/// Raised after the law fails boundary validation; the reports are written
/// before it is thrown.
class LawValidationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunResult {
  std::vector<StatReport> reports;
  std::filesystem::path output;
  bool pass = false;
};

/// Runs the configured experiment, writing raw/ CSVs, reports.json, the
/// resolved config and manifest.json to config.output. Reports are computed
/// from the raw files as written. Throws std::invalid_argument for config
/// problems and std::runtime_error for runtime failures.
RunResult run_experiment(const ExperimentConfig& config);

struct ReplayResult {
  std::vector<StatReport> reports;
  bool identical = false;  // recomputed reports.json matches the stored bytes
  bool pass = false;
};

/// Recomputes every report of a finished run from its manifest and raw files.
ReplayResult replay(const std::filesystem::path& output_dir);

/// Runs body(i) for i in [0, count) on `threads` workers. The first exception
/// is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Seed of draw `attempt` of replicate `replicate` at generation n.
std::uint64_t replicate_seed(std::uint64_t seed, int n, std::size_t replicate, int attempt);

struct SurvivingPopulation {
  Population population;
  std::uint64_t seed = 0;
  int extinct_draws = 0;
  int budget_draws = 0;
};

/// Draws until the tree survives to generation n (and fits the particle
/// budget when resample_on_budget is set). Throws std::runtime_error after
/// max_attempts draws.
SurvivingPopulation simulate_surviving(const ReproductionLaw& law, const ExperimentConfig& config, int n,
                                       std::size_t replicate);

/// rho_{n,k}(f) and rho_{n,n-k}(f) per replicate and per k.
struct DecorationSamples {
  int n = 0;
  std::vector<int> k;
  std::vector<std::vector<double>> rho_k;   // [k index][replicate]
  std::vector<std::vector<double>> rho_nk;  // [k index][replicate], window at depth n - k
};

DecorationSamples decoration_samples(std::span<const Population> pops, std::span<const int> ks, Trapezoid f);

/// KS distances between successive k, a stabilization gate (last distance
/// below the first) and the fraction of replicates with
/// rho_{n,k}(f) != rho_{n,n-k}(f) per k, gated on non-increase with a strict
/// overall drop. Throws std::invalid_argument with fewer than min_replicates.
std::vector<StatReport> decoration_stabilization(const DecorationSamples& samples, std::size_t min_replicates = 20);
std::vector<StatReport> decoration_stabilization(std::span<const Population> pops, std::span<const int> ks,
                                                 Trapezoid f = {}, std::size_t min_replicates = 20);

}  // namespace brwlab
