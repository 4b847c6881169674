#include "brwlab/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "brwlab/io_util.hpp"

namespace brwlab {

namespace {

constexpr const char* kKindNames[] = {"validate", "simulate", "extremal", "decoration",
                                      "overlap",  "limits",   "estimate-cstar"};

const std::set<std::string> kObservables{"extremal", "decoration", "overlap"};
const std::set<std::string> kLimitChecks{"ppp", "sdppp", "thinning", "cstar", "pd", "beta", "gibbs"};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + path + ": " + what);
}

void require_keys(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) fail(path.empty() ? "<root>" : path, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

std::string scalar(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) fail(path, "expected a scalar");
  return n.Scalar();
}

double to_double(const YAML::Node& n, const std::string& path) {
  try {
    return parse_double(scalar(n, path));
  } catch (const std::invalid_argument&) {
    fail(path, "expected a number, got '" + n.Scalar() + "'");
  }
}

long long to_integer(const YAML::Node& n, const std::string& path) {
  const std::string s = scalar(n, path);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    fail(path, "expected an integer, got '" + s + "'");
  }
  if (used != s.size()) fail(path, "expected an integer, got '" + s + "'");
  return v;
}

std::uint64_t to_u64(const YAML::Node& n, const std::string& path) {
  const std::string s = scalar(n, path);
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    fail(path, "expected an unsigned integer, got '" + s + "'");
  }
  if (used != s.size() || s.starts_with('-')) fail(path, "expected an unsigned integer, got '" + s + "'");
  return v;
}

std::size_t to_count(const YAML::Node& n, const std::string& path) {
  const long long v = to_integer(n, path);
  if (v < 0) fail(path, "must be >= 0");
  return static_cast<std::size_t>(v);
}

bool to_bool(const YAML::Node& n, const std::string& path) {
  const std::string s = scalar(n, path);
  if (s == "true") return true;
  if (s == "false") return false;
  fail(path, "expected true or false");
}

template <typename T, typename F>
std::vector<T> to_list(const YAML::Node& n, const std::string& path, F convert) {
  std::vector<T> out;
  if (n.IsScalar()) {
    out.push_back(convert(n, path));
    return out;
  }
  if (!n.IsSequence()) fail(path, "expected a list");
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(convert(n[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> doubles(const YAML::Node& n, const std::string& path) { return to_list<double>(n, path, to_double); }

std::vector<int> ints(const YAML::Node& n, const std::string& path) {
  return to_list<int>(n, path, [](const YAML::Node& x, const std::string& p) { return static_cast<int>(to_integer(x, p)); });
}

std::vector<std::string> strings(const YAML::Node& n, const std::string& path) {
  return to_list<std::string>(n, path, scalar);
}

std::pair<double, double> interval(const YAML::Node& n, const std::string& path) {
  const auto v = doubles(n, path);
  if (v.size() != 2) fail(path, "expected [lo, hi]");
  return {v[0], v[1]};
}

template <typename F>
void with(const YAML::Node& parent, const std::string& path, const char* key, F apply) {
  if (const auto n = parent[key]) apply(n, join(path, key));
}

void parse_barrier(const YAML::Node& node, const std::string& path, BarrierSpec& b) {
  require_keys(node, path, {"y", "y_top", "taper_base", "taper_slope"});
  with(node, path, "y", [&](const auto& n, const auto& p) { b.y = to_double(n, p); });
  with(node, path, "y_top", [&](const auto& n, const auto& p) { b.y_top = to_double(n, p); });
  with(node, path, "taper_base", [&](const auto& n, const auto& p) { b.taper_base = to_double(n, p); });
  with(node, path, "taper_slope", [&](const auto& n, const auto& p) { b.taper_slope = to_double(n, p); });
}

void parse_simulation(const YAML::Node& node, const std::string& path, SimulationConfig& s) {
  require_keys(node, path,
               {"mode", "n", "barrier", "max_particles", "max_attempts", "resample_on_budget", "mark_depth",
                "write_populations"});
  with(node, path, "mode", [&](const auto& n, const auto& p) {
    try {
      s.mode = parse_mode(scalar(n, p));
    } catch (const std::invalid_argument& e) {
      fail(p, e.what());
    }
  });
  with(node, path, "n", [&](const auto& n, const auto& p) { s.n = ints(n, p); });
  with(node, path, "barrier", [&](const auto& n, const auto& p) { parse_barrier(n, p, s.barrier); });
  with(node, path, "max_particles", [&](const auto& n, const auto& p) { s.max_particles = to_count(n, p); });
  with(node, path, "max_attempts", [&](const auto& n, const auto& p) { s.max_attempts = static_cast<int>(to_integer(n, p)); });
  with(node, path, "resample_on_budget", [&](const auto& n, const auto& p) { s.resample_on_budget = to_bool(n, p); });
  with(node, path, "mark_depth", [&](const auto& n, const auto& p) { s.mark_depth = static_cast<int>(to_integer(n, p)); });
  with(node, path, "write_populations", [&](const auto& n, const auto& p) { s.write_populations = to_bool(n, p); });
}

void parse_limits(const YAML::Node& node, const std::string& path, LimitsConfig& l) {
  require_keys(node, path, {"checks", "draws", "ppp", "sdppp", "cstar", "pd", "gibbs"});
  with(node, path, "checks", [&](const auto& n, const auto& p) { l.checks = strings(n, p); });
  with(node, path, "draws", [&](const auto& n, const auto& p) { l.draws = to_count(n, p); });
  with(node, path, "ppp", [&](const auto& node2, const auto& p2) {
    require_keys(node2, p2, {"c", "level", "thinning_q"});
    with(node2, p2, "c", [&](const auto& n, const auto& p) { l.ppp_c = to_double(n, p); });
    with(node2, p2, "level", [&](const auto& n, const auto& p) { l.ppp_level = to_double(n, p); });
    with(node2, p2, "thinning_q", [&](const auto& n, const auto& p) { l.thinning_q = to_double(n, p); });
  });
  with(node, path, "sdppp", [&](const auto& node2, const auto& p2) {
    require_keys(node2, p2, {"c", "shift", "window_top", "void_levels"});
    with(node2, p2, "c", [&](const auto& n, const auto& p) { l.sdppp_c = to_double(n, p); });
    with(node2, p2, "shift", [&](const auto& n, const auto& p) { l.sdppp_shift = to_double(n, p); });
    with(node2, p2, "window_top", [&](const auto& n, const auto& p) { l.sdppp_window = to_double(n, p); });
    with(node2, p2, "void_levels", [&](const auto& n, const auto& p) { l.void_levels = doubles(n, p); });
  });
  with(node, path, "cstar", [&](const auto& node2, const auto& p2) {
    require_keys(node2, p2, {"samples", "c"});
    with(node2, p2, "samples", [&](const auto& n, const auto& p) { l.cstar_samples = to_count(n, p); });
    with(node2, p2, "c", [&](const auto& n, const auto& p) { l.cstar_c = to_double(n, p); });
  });
  with(node, path, "pd", [&](const auto& node2, const auto& p2) {
    require_keys(node2, p2, {"beta", "truncation_eps"});
    with(node2, p2, "beta", [&](const auto& n, const auto& p) { l.pd_beta = doubles(n, p); });
    with(node2, p2, "truncation_eps", [&](const auto& n, const auto& p) { l.truncation_eps = doubles(n, p); });
  });
  with(node, path, "gibbs", [&](const auto& node2, const auto& p2) {
    require_keys(node2, p2, {"beta", "draws", "tolerance"});
    with(node2, p2, "beta", [&](const auto& n, const auto& p) { l.gibbs_beta = to_double(n, p); });
    with(node2, p2, "draws", [&](const auto& n, const auto& p) { l.gibbs_draws = to_count(n, p); });
    with(node2, p2, "tolerance", [&](const auto& n, const auto& p) { l.gibbs_tolerance = to_double(n, p); });
  });
}

void parse_tolerances(const YAML::Node& node, const std::string& path, Tolerances& t) {
  require_keys(node, path, {"boundary", "identity", "se_multiplier", "ks_p", "pd_distance", "pd_se", "dichotomy_factor"});
  with(node, path, "boundary", [&](const auto& n, const auto& p) { t.boundary = to_double(n, p); });
  with(node, path, "identity", [&](const auto& n, const auto& p) { t.identity = to_double(n, p); });
  with(node, path, "se_multiplier", [&](const auto& n, const auto& p) { t.se_multiplier = to_double(n, p); });
  with(node, path, "ks_p", [&](const auto& n, const auto& p) { t.ks_p = to_double(n, p); });
  with(node, path, "pd_distance", [&](const auto& n, const auto& p) { t.pd_distance = to_double(n, p); });
  with(node, path, "pd_se", [&](const auto& n, const auto& p) { t.pd_se = to_double(n, p); });
  with(node, path, "dichotomy_factor", [&](const auto& n, const auto& p) { t.dichotomy_factor = to_double(n, p); });
}

template <typename T>
std::string flow(const std::vector<T>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, double>) {
      out += format_double(v[i]);
    } else if constexpr (std::is_same_v<T, std::string>) {
      out += v[i];
    } else {
      out += std::to_string(v[i]);
    }
  }
  return out + "]";
}

}  // namespace

const char* to_string(ExperimentKind kind) { return kKindNames[static_cast<int>(kind)]; }

ExperimentKind parse_experiment(const std::string& text) {
  for (int i = 0; i < 7; ++i) {
    if (text == kKindNames[i]) return static_cast<ExperimentKind>(i);
  }
  throw std::invalid_argument("unknown experiment '" + text + "'");
}

std::size_t ExperimentConfig::replicates_at(std::size_t grid_index) const {
  return replicates.size() == 1 ? replicates.front() : replicates.at(grid_index);
}

bool ExperimentConfig::wants(const std::string& observable) const {
  if (!observables.empty()) return std::find(observables.begin(), observables.end(), observable) != observables.end();
  switch (experiment) {
    case ExperimentKind::extremal:
    case ExperimentKind::estimate_cstar:
      return observable == "extremal";
    case ExperimentKind::decoration:
      return observable == "decoration";
    case ExperimentKind::overlap:
      return observable == "overlap";
    default:
      return false;
  }
}

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (replicates.empty()) bad("replicates: at least one value needed");
  for (auto r : replicates) {
    if (r < 1) bad("replicates: must be >= 1");
  }
  if (replicates.size() != 1 && replicates.size() != simulation.n.size()) {
    bad("replicates: give one value or one per simulation.n entry");
  }
  if (threads < 1) bad("threads: must be >= 1");
  if (output.empty()) bad("output: empty directory name");
  if (simulation.n.empty()) bad("simulation.n: empty grid");
  for (int n : simulation.n) {
    if (n < 1) bad("simulation.n: values must be >= 1");
  }
  if (!std::is_sorted(simulation.n.begin(), simulation.n.end()) ||
      std::adjacent_find(simulation.n.begin(), simulation.n.end()) != simulation.n.end()) {
    bad("simulation.n: must be strictly increasing");
  }
  try {
    simulation.barrier.validate();
  } catch (const std::invalid_argument& e) {
    bad(std::string("simulation.barrier: ") + e.what());
  }
  if (simulation.max_attempts < 1) bad("simulation.max_attempts: must be >= 1");
  if (simulation.mark_depth < 0) bad("simulation.mark_depth: must be >= 0");
  if (simulation.max_particles < 1) bad("simulation.max_particles: must be >= 1");
  for (const auto& o : observables) {
    if (!kObservables.count(o)) bad("observables: unknown observable '" + o + "'");
  }
  for (double b : grids.beta) {
    if (!(b > 1.0)) bad("grids.beta: values must exceed 1");
  }
  for (double t : grids.t) {
    if (!(t >= 0.0 && t <= 1.0)) bad("grids.t: values must lie in [0, 1]");
  }
  for (int k : grids.k) {
    if (k < 0) bad("grids.k: values must be >= 0");
  }
  if (!std::is_sorted(grids.k.begin(), grids.k.end())) bad("grids.k: must be increasing");
  if (wants("overlap") && !simulation.n.empty()) {
    const int largest = *std::max_element(simulation.n.begin(), simulation.n.end());
    for (int k : grids.k) {
      if (2 * k > largest) {
        bad("grids.k: k = " + std::to_string(k) + " needs 2k <= n for n = " + std::to_string(largest));
      }
    }
  }
  for (int k : decoration.k) {
    if (k < 0) bad("decoration.k: values must be >= 0");
  }
  if (!std::is_sorted(decoration.k.begin(), decoration.k.end())) bad("decoration.k: must be increasing");
  if (wants("decoration")) {
    for (int k : decoration.k) {
      if (k > simulation.n.front()) bad("decoration.k: k = " + std::to_string(k) + " exceeds the smallest n");
    }
  }
  if (!(decoration.f_a < decoration.f_b)) bad("decoration.f: need a < b");
  if (!(extremal.fit_a < extremal.fit_b)) bad("extremal.fit_window: need a < b");
  if (extremal.bootstrap < 10) bad("extremal.bootstrap: need >= 10 resamples");
  for (const auto& c : limits.checks) {
    if (!kLimitChecks.count(c)) bad("limits.checks: unknown check '" + c + "'");
  }
  if (limits.draws < 100) bad("limits.draws: need >= 100");
  if (!(limits.thinning_q > 0.0 && limits.thinning_q < 1.0)) bad("limits.ppp.thinning_q: must lie in (0, 1)");
  if (!(limits.ppp_c > 0.0) || !(limits.sdppp_c > 0.0) || !(limits.cstar_c > 0.0)) bad("limits: intensities must be positive");
  for (double b : limits.pd_beta) {
    if (!(b > 1.0)) bad("limits.pd.beta: values must exceed 1");
  }
  if (!(limits.gibbs_beta > 1.0)) bad("limits.gibbs.beta: must exceed 1");
  if (!(limits.gibbs_tolerance > 0.0)) bad("limits.gibbs.tolerance: must be positive");
  for (double e : limits.truncation_eps) {
    if (!(e > 0.0)) bad("limits.pd.truncation_eps: values must be positive");
  }
  if (!(pd_oracle_eps > 0.0)) bad("pd_oracle.truncation_eps: must be positive");
  if (pd_oracle_draws < 2) bad("pd_oracle.draws: need >= 2");
  if (validation_samples < 1000) bad("validation.samples: need >= 1000");
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("config: YAML syntax error: ") + e.what());
  }
  ExperimentConfig c;
  if (root.IsNull()) {
    c.validate();
    return c;
  }
  const std::string p;
  require_keys(root, p,
               {"experiment", "seed", "replicates", "threads", "output", "law", "validation", "pd_oracle",
                "simulation", "observables", "grids", "decoration", "extremal", "limits", "tolerances"});
  with(root, p, "experiment", [&](const auto& n, const auto& path) {
    try {
      c.experiment = parse_experiment(scalar(n, path));
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  });
  with(root, p, "seed", [&](const auto& n, const auto& path) { c.seed = to_u64(n, path); });
  with(root, p, "replicates", [&](const auto& n, const auto& path) {
    c.replicates = to_list<std::size_t>(n, path, to_count);
  });
  with(root, p, "threads", [&](const auto& n, const auto& path) { c.threads = static_cast<unsigned>(to_count(n, path)); });
  with(root, p, "output", [&](const auto& n, const auto& path) { c.output = scalar(n, path); });
  with(root, p, "law", [&](const auto& node, const auto& path) {
    require_keys(node, path, {"id", "lambda", "mean", "variance"});
    with(node, path, "id", [&](const auto& n, const auto& q) { c.law.id = scalar(n, q); });
    with(node, path, "lambda", [&](const auto& n, const auto& q) { c.law.lambda = to_double(n, q); });
    with(node, path, "mean", [&](const auto& n, const auto& q) { c.law.mean = to_double(n, q); });
    with(node, path, "variance", [&](const auto& n, const auto& q) { c.law.variance = to_double(n, q); });
  });
  with(root, p, "validation", [&](const auto& node, const auto& path) {
    require_keys(node, path, {"samples"});
    with(node, path, "samples", [&](const auto& n, const auto& q) { c.validation_samples = to_count(n, q); });
  });
  with(root, p, "pd_oracle", [&](const auto& node, const auto& path) {
    require_keys(node, path, {"draws", "truncation_eps"});
    with(node, path, "draws", [&](const auto& n, const auto& q) { c.pd_oracle_draws = to_count(n, q); });
    with(node, path, "truncation_eps", [&](const auto& n, const auto& q) { c.pd_oracle_eps = to_double(n, q); });
  });
  with(root, p, "simulation", [&](const auto& n, const auto& path) { parse_simulation(n, path, c.simulation); });
  with(root, p, "observables", [&](const auto& n, const auto& path) { c.observables = strings(n, path); });
  with(root, p, "grids", [&](const auto& node, const auto& path) {
    require_keys(node, path, {"beta", "t", "k", "z"});
    with(node, path, "beta", [&](const auto& n, const auto& q) { c.grids.beta = doubles(n, q); });
    with(node, path, "t", [&](const auto& n, const auto& q) { c.grids.t = doubles(n, q); });
    with(node, path, "k", [&](const auto& n, const auto& q) { c.grids.k = ints(n, q); });
    with(node, path, "z", [&](const auto& n, const auto& q) { c.grids.z = doubles(n, q); });
  });
  with(root, p, "decoration", [&](const auto& node, const auto& path) {
    require_keys(node, path, {"k", "f"});
    with(node, path, "k", [&](const auto& n, const auto& q) { c.decoration.k = ints(n, q); });
    with(node, path, "f", [&](const auto& n, const auto& q) { std::tie(c.decoration.f_a, c.decoration.f_b) = interval(n, q); });
  });
  with(root, p, "extremal", [&](const auto& node, const auto& path) {
    require_keys(node, path, {"atoms_top", "fit_window", "bootstrap", "max_mean_count"});
    with(node, path, "atoms_top", [&](const auto& n, const auto& q) { c.extremal.atoms_top = to_double(n, q); });
    with(node, path, "fit_window",
         [&](const auto& n, const auto& q) { std::tie(c.extremal.fit_a, c.extremal.fit_b) = interval(n, q); });
    with(node, path, "bootstrap", [&](const auto& n, const auto& q) { c.extremal.bootstrap = to_count(n, q); });
    with(node, path, "max_mean_count", [&](const auto& n, const auto& q) { c.extremal.max_mean_count = to_double(n, q); });
  });
  with(root, p, "limits", [&](const auto& n, const auto& path) { parse_limits(n, path, c.limits); });
  with(root, p, "tolerances", [&](const auto& n, const auto& path) { parse_tolerances(n, path, c.tolerances); });
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_yaml(const ExperimentConfig& c) {
  std::ostringstream o;
  const auto& s = c.simulation;
  const auto& l = c.limits;
  const auto& t = c.tolerances;
  o << "experiment: " << to_string(c.experiment) << '\n'
    << "seed: " << c.seed << '\n'
    << "replicates: " << flow(c.replicates) << '\n'
    << "threads: " << c.threads << '\n'
    << "output: \"" << c.output << "\"\n"
    << "law:\n  id: " << c.law.id << "\n  lambda: " << format_double(c.law.lambda)
      << "\n  mean: " << format_double(c.law.mean) << "\n  variance: " << format_double(c.law.variance) << '\n'
    << "validation:\n  samples: " << c.validation_samples << '\n'
    << "pd_oracle:\n  draws: " << c.pd_oracle_draws << "\n  truncation_eps: " << format_double(c.pd_oracle_eps) << '\n'
    << "simulation:\n"
    << "  mode: " << to_string(s.mode) << '\n'
    << "  n: " << flow(s.n) << '\n'
    << "  barrier:\n"
    << "    y: " << format_double(s.barrier.y) << '\n'
    << "    y_top: " << format_double(s.barrier.y_top) << '\n'
    << "    taper_base: " << format_double(s.barrier.taper_base) << '\n'
    << "    taper_slope: " << format_double(s.barrier.taper_slope) << '\n'
    << "  max_particles: " << s.max_particles << '\n'
    << "  max_attempts: " << s.max_attempts << '\n'
    << "  resample_on_budget: " << (s.resample_on_budget ? "true" : "false") << '\n'
    << "  mark_depth: " << s.mark_depth << '\n'
    << "  write_populations: " << (s.write_populations ? "true" : "false") << '\n'
    << "observables: " << flow(c.observables) << '\n'
    << "grids:\n"
    << "  beta: " << flow(c.grids.beta) << '\n'
    << "  t: " << flow(c.grids.t) << '\n'
    << "  k: " << flow(c.grids.k) << '\n'
    << "  z: " << flow(c.grids.z) << '\n'
    << "decoration:\n"
    << "  k: " << flow(c.decoration.k) << '\n'
    << "  f: " << flow(std::vector<double>{c.decoration.f_a, c.decoration.f_b}) << '\n'
    << "extremal:\n"
    << "  atoms_top: " << format_double(c.extremal.atoms_top) << '\n'
    << "  fit_window: " << flow(std::vector<double>{c.extremal.fit_a, c.extremal.fit_b}) << '\n'
    << "  bootstrap: " << c.extremal.bootstrap << '\n'
    << "  max_mean_count: " << format_double(c.extremal.max_mean_count) << '\n'
    << "limits:\n"
    << "  checks: " << flow(l.checks) << '\n'
    << "  draws: " << l.draws << '\n'
    << "  ppp:\n    c: " << format_double(l.ppp_c) << "\n    level: " << format_double(l.ppp_level)
    << "\n    thinning_q: " << format_double(l.thinning_q) << '\n'
    << "  sdppp:\n    c: " << format_double(l.sdppp_c) << "\n    shift: " << format_double(l.sdppp_shift)
    << "\n    window_top: " << format_double(l.sdppp_window) << "\n    void_levels: " << flow(l.void_levels) << '\n'
    << "  cstar:\n    samples: " << l.cstar_samples << "\n    c: " << format_double(l.cstar_c) << '\n'
    << "  pd:\n    beta: " << flow(l.pd_beta) << "\n    truncation_eps: " << flow(l.truncation_eps) << '\n'
    << "  gibbs:\n    beta: " << format_double(l.gibbs_beta) << "\n    draws: " << l.gibbs_draws << "\n    tolerance: " << format_double(l.gibbs_tolerance) << '\n'
    << "tolerances:\n"
    << "  boundary: " << format_double(t.boundary) << '\n'
    << "  identity: " << format_double(t.identity) << '\n'
    << "  se_multiplier: " << format_double(t.se_multiplier) << '\n'
    << "  ks_p: " << format_double(t.ks_p) << '\n'
    << "  pd_distance: " << format_double(t.pd_distance) << '\n'
    << "  pd_se: " << format_double(t.pd_se) << '\n'
    << "  dichotomy_factor: " << format_double(t.dichotomy_factor) << '\n';
  return o.str();
}

std::string config_hash(const ExperimentConfig& config) {
  // Thread count and output location do not change any result.
  ExperimentConfig canonical = config;
  canonical.threads = 1;
  canonical.output = "-";
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_yaml(canonical)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace brwlab
