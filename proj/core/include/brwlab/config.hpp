#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brwlab/law.hpp"
#include "brwlab/population.hpp"

namespace brwlab {

enum class ExperimentKind { validate, simulate, extremal, decoration, overlap, limits, estimate_cstar };

const char* to_string(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& text);

struct SimulationConfig {
  SimulationMode mode = SimulationMode::pruned;
  std::vector<int> n{16};
  BarrierSpec barrier{15.0, 17.0, 8.0, 2.0};
  std::size_t max_particles = std::size_t{8} << 20;  // per generation
  int max_attempts = 100;         // draws per replicate while conditioning on survival
  bool resample_on_budget = true;  // redraw a replicate that outgrows max_particles
  int mark_depth = 4;
  bool write_populations = false;  // simulate experiment: population CSV + snapshot per replicate
};

struct GridConfig {
  std::vector<double> beta{2.0};
  std::vector<double> t{0.5};
  std::vector<int> k{2, 4, 8, 16};
  std::vector<double> z{3.0};
};

struct DecorationConfig {
  std::vector<int> k{1, 8, 16};
  double f_a = 0.0;  // trapezoid test function on [f_a, f_b]
  double f_b = 3.0;
};

struct ExtremalConfig {
  double atoms_top = 3.0;             // atoms of gamma_n up to this level go to the raw output
  double fit_a = -3.0;                // estimate-cstar window
  double fit_b = 0.0;
  std::size_t bootstrap = 1000;
  double max_mean_count = 50.0;
};

struct LimitsConfig {
  std::vector<std::string> checks{"ppp", "sdppp", "thinning", "cstar", "pd", "beta", "gibbs"};
  std::size_t draws = 100000;
  double ppp_c = 1.0;
  double ppp_level = 0.0;
  double thinning_q = 0.5;
  double sdppp_c = 1.0;
  double sdppp_shift = 0.5;
  double sdppp_window = 2.0;
  std::vector<double> void_levels{-1.0, 0.0, 0.5, 1.0};
  std::size_t cstar_samples = 400;
  double cstar_c = 2.0;
  std::vector<double> pd_beta{1.5, 2.0, 4.0};
  std::vector<double> truncation_eps{1e-6, 1e-8};
  double gibbs_beta = 2.0;
  std::size_t gibbs_draws = 2000;
  double gibbs_tolerance = 1e-3;
};

struct Tolerances {
  double boundary = 1e-12;       // closed-form moment identities
  double identity = 1e-9;        // relative, per-tree identities
  double se_multiplier = 3.0;
  double ks_p = 0.01;
  double pd_distance = 0.08;     // |mean overlap tail - oracle| at the largest n
  double pd_se = 0.002;          // required SE of the PD oracle
  double dichotomy_factor = 2.0;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::simulate;
  std::uint64_t seed = 1;
  std::vector<std::size_t> replicates{200};  // one value, or one per n
  unsigned threads = 1;
  std::string output = "brwlab-out";
  LawParams law;
  std::size_t validation_samples = 100000;
  std::size_t pd_oracle_draws = 20000;
  double pd_oracle_eps = 1e-8;
  SimulationConfig simulation;
  std::vector<std::string> observables;  // sweeps; empty means the experiment's own family
  GridConfig grids;
  DecorationConfig decoration;
  ExtremalConfig extremal;
  LimitsConfig limits;
  Tolerances tolerances;

  std::size_t replicates_at(std::size_t grid_index) const;
  bool wants(const std::string& observable) const;
  /// Checks ranges and grid preconditions; throws std::invalid_argument.
  void validate() const;
};

/// Parses YAML text. Unknown keys, malformed values and out-of-range
/// settings throw std::invalid_argument naming the offending key.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::string& path);

/// Canonical YAML of every setting; parse_config(to_yaml(c)) reproduces c.
std::string to_yaml(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical YAML (threads and output excluded), as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace brwlab
