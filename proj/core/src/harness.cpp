#include "brwlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <thread>

#include "brwlab/io_util.hpp"
#include "brwlab/limit_models.hpp"
#include "brwlab/observables.hpp"
#include "brwlab/overlap.hpp"
#include "brwlab/rng.hpp"
#include "brwlab/simulate.hpp"
#include "brwlab/stats.hpp"

#ifndef BRWLAB_VERSION
#define BRWLAB_VERSION "unknown"
#endif

namespace brwlab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Reports and tables

bool all_pass(std::span<const StatReport> reports) {
  return std::all_of(reports.begin(), reports.end(), [](const StatReport& r) { return r.pass; });
}

namespace {

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

void write_reports_json(std::ostream& out, std::span<const StatReport> reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    arr.push_back({{"name", r.name},
                   {"test", r.test},
                   {"estimate", number(r.estimate)},
                   {"standard_error", number(r.standard_error)},
                   {"statistic", number(r.statistic)},
                   {"threshold", number(r.threshold)},
                   {"pass", r.pass},
                   {"detail", r.detail}});
  }
  json doc = {{"pass", all_pass(reports)}, {"reports", arr}};
  out << doc.dump(2) << '\n';
}

std::size_t Table::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::out_of_range("table has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

bool Table::has_column(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

double Table::number(std::size_t row, const std::string& name) const {
  return parse_double(rows.at(row).at(column(name)));
}

std::vector<double> Table::numbers(const std::string& name) const {
  const auto c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(parse_double(r.at(c)));
  return out;
}

void Table::write_csv(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

Table Table::read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Table t;
  std::string text;
  bool first = true;
  while (std::getline(in, text)) {
    auto cells = split(text, ',');
    if (first) {
      t.header = std::move(cells);
      first = false;
      continue;
    }
    if (cells.size() != t.header.size()) throw std::runtime_error(path.string() + ": ragged row");
    t.rows.push_back(std::move(cells));
  }
  if (first) throw std::runtime_error(path.string() + ": empty file");
  return t;
}

// ---------------------------------------------------------------------------
// Replication plumbing

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const auto workers = std::min<std::size_t>(threads, count);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        if (stop.load()) return;
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          stop.store(true);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t replicate_seed(std::uint64_t seed, int n, std::size_t replicate, int attempt) {
  std::uint64_t k = derive_key(mix64(seed), static_cast<std::uint64_t>(n));
  k = derive_key(k, replicate);
  return derive_key(k, static_cast<std::uint64_t>(attempt));
}

SurvivingPopulation simulate_surviving(const ReproductionLaw& law, const ExperimentConfig& config, int n,
                                       std::size_t replicate) {
  const auto& sim = config.simulation;
  SimulationRequest req;
  req.n = n;
  req.mode = sim.mode;
  req.barrier = sim.barrier;
  req.mark_depth = sim.mark_depth;
  req.max_particles = sim.max_particles;
  int extinct = 0;
  int budget = 0;
  for (int attempt = 0; attempt < sim.max_attempts; ++attempt) {
    req.seed = replicate_seed(config.seed, n, replicate, attempt);
    try {
      Population pop = simulate(law, req);
      if (pop.extinct()) {
        ++extinct;
        continue;
      }
      return {std::move(pop), req.seed, extinct, budget};
    } catch (const MemoryBudgetExceeded&) {
      if (!sim.resample_on_budget) throw;
      ++budget;
    }
  }
  throw std::runtime_error("replicate " + std::to_string(replicate) + " at n=" + std::to_string(n) +
                           ": no usable draw within " + std::to_string(sim.max_attempts) + " attempts (" +
                           std::to_string(extinct) + " extinct, " + std::to_string(budget) + " over budget)");
}

// ---------------------------------------------------------------------------
// Decoration stabilization

DecorationSamples decoration_samples(std::span<const Population> pops, std::span<const int> ks, Trapezoid f) {
  DecorationSamples out;
  if (pops.empty()) return out;
  out.n = pops.front().generation();
  out.k.assign(ks.begin(), ks.end());
  out.rho_k.resize(ks.size());
  out.rho_nk.resize(ks.size());
  for (const auto& pop : pops) {
    if (pop.generation() != out.n) throw std::invalid_argument("decoration_samples: populations differ in n");
    for (std::size_t i = 0; i < ks.size(); ++i) {
      out.rho_k[i].push_back(decoration_window(pop, ks[i]).integrate(f));
      out.rho_nk[i].push_back(decoration_window(pop, out.n - ks[i]).integrate(f));
    }
  }
  return out;
}

namespace {

std::string key(double x) { return format_double(x); }

std::string join_values(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += format_double(v[i]);
  }
  return s;
}

StatReport trend_report(std::string name, const std::vector<int>& ks, const std::vector<double>& frac, double factor) {
  StatReport r;
  r.name = std::move(name);
  r.test = "trend";
  bool monotone = true;
  for (std::size_t i = 1; i < frac.size(); ++i) monotone = monotone && frac[i] <= frac[i - 1];
  r.estimate = frac.back();
  r.statistic = frac.front();
  r.threshold = factor;
  // A factor of 1 asks for a strict drop; larger factors for a drop by that ratio.
  const bool drop = factor <= 1.0 ? frac.back() < frac.front() : frac.back() * factor <= frac.front();
  r.pass = monotone && drop && frac.size() >= 2;
  std::string d = "k:";
  for (int k : ks) d += " " + std::to_string(k);
  r.detail = d + "; fraction: " + join_values(frac) + (monotone ? "" : "; not non-increasing") +
             (drop ? "" : "; insufficient drop");
  return r;
}

}  // namespace

std::vector<StatReport> decoration_stabilization(const DecorationSamples& s, std::size_t min_replicates) {
  if (s.k.size() < 2) throw std::invalid_argument("decoration_stabilization: need at least two k values");
  const std::size_t reps = s.rho_k.empty() ? 0 : s.rho_k.front().size();
  if (reps < min_replicates) {
    throw std::invalid_argument("decoration_stabilization: " + std::to_string(reps) + " replicates, need " +
                                std::to_string(min_replicates));
  }
  const std::string tag = "[n=" + std::to_string(s.n) + "]";
  std::vector<StatReport> out;
  std::vector<double> dist;
  for (std::size_t i = 0; i + 1 < s.k.size(); ++i) dist.push_back(ks_two_sample(s.rho_k[i], s.rho_k[i + 1]).statistic);
  StatReport stab;
  stab.name = "decoration.stabilization" + tag;
  stab.test = "ks";
  stab.estimate = dist.back();
  stab.statistic = dist.front();
  stab.pass = dist.size() >= 2 ? dist.back() < dist.front() : true;
  stab.detail = "successive KS distances: " + join_values(dist);
  out.push_back(stab);

  std::vector<int> ks;
  std::vector<double> frac;
  for (std::size_t i = 0; i < s.k.size(); ++i) {
    if (2 * s.k[i] > s.n) continue;
    std::size_t differ = 0;
    for (std::size_t r = 0; r < reps; ++r) differ += s.rho_k[i][r] != s.rho_nk[i][r];
    ks.push_back(s.k[i]);
    frac.push_back(static_cast<double>(differ) / static_cast<double>(reps));
  }
  if (frac.size() >= 2) out.push_back(trend_report("decoration.depth_asymmetry" + tag, ks, frac, 1.0));
  return out;
}

std::vector<StatReport> decoration_stabilization(std::span<const Population> pops, std::span<const int> ks, Trapezoid f,
                                                 std::size_t min_replicates) {
  return decoration_stabilization(decoration_samples(pops, ks, f), min_replicates);
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

constexpr std::uint64_t kValidateStream = 0x76616c6964617465ULL;
constexpr std::uint64_t kOracleStream = 0x6f7261636c650000ULL;
constexpr std::uint64_t kLimitsStream = 0x6c696d6974730000ULL;

std::uint64_t stream(std::uint64_t seed, std::uint64_t tag) { return derive_key(mix64(seed), tag); }

std::string ceiling_cell(const std::optional<double>& c) { return c ? format_double(*c) : "none"; }

struct RawDir {
  fs::path dir;
  std::vector<std::string> files;

  void write(const std::string& name, const Table& t) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    t.write_csv(out);
    if (!out) throw std::runtime_error("write failed for " + (dir / name).string());
    files.push_back("raw/" + name);
  }
};

bool simulation_based(ExperimentKind k) { return k != ExperimentKind::limits; }
bool sweep(ExperimentKind k) {
  return k == ExperimentKind::extremal || k == ExperimentKind::decoration || k == ExperimentKind::overlap ||
         k == ExperimentKind::estimate_cstar;
}

std::string n_file(const char* stem, int n) { return std::string(stem) + "_n" + std::to_string(n) + ".csv"; }

// --- validate -------------------------------------------------------------

Table validation_table(const ValidationReport& v) {
  Table t;
  t.header = {"name", "target", "estimate", "standard_error", "closed_form", "pass", "message"};
  for (const auto& c : v.checks) {
    t.rows.push_back({c.name, format_double(c.target), format_double(c.estimate), format_double(c.standard_error),
                      c.closed_form ? format_double(*c.closed_form) : "none", c.pass ? "1" : "0",
                      c.message.empty() ? "-" : c.message});
  }
  return t;
}

std::vector<StatReport> summarize_validation(const Table& t) {
  std::vector<StatReport> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    StatReport r;
    r.name = "law." + row[t.column("name")];
    r.test = row[t.column("closed_form")] == "none" ? "tolerance" : "identity";
    r.estimate = t.number(i, "estimate");
    r.standard_error = t.number(i, "standard_error");
    r.statistic = row[t.column("closed_form")] == "none" ? r.estimate : t.number(i, "closed_form");
    r.threshold = t.number(i, "target");
    r.pass = row[t.column("pass")] == "1";
    if (row[t.column("message")] != "-") r.detail = row[t.column("message")];
    out.push_back(r);
  }
  return out;
}

// --- per-replicate observables -----------------------------------------------

// Entanglement depths k of the grid with 2k <= n.
std::vector<int> midrange_k(const ExperimentConfig& c, int n) {
  std::vector<int> out;
  for (int k : c.grids.k) {
    if (2 * k <= n) out.push_back(k);
  }
  return out;
}

std::vector<std::string> sweep_header(const ExperimentConfig& c, int n) {
  std::vector<std::string> h{"replicate", "seed", "extinct_draws", "budget_draws", "frontier", "ceiling"};
  if (c.wants("extremal")) {
    for (const char* s : {"min_shift", "seen_min", "W", "Z"}) h.emplace_back(s);
  }
  if (c.wants("overlap")) {
    for (double b : c.grids.beta) {
      h.push_back("total_b" + key(b));
      for (int k : midrange_k(c, n)) h.push_back("R_b" + key(b) + "_k" + std::to_string(k));
      for (double t : c.grids.t) {
        h.push_back("tail_b" + key(b) + "_t" + key(t));
        for (int k : c.grids.k) {
          if (k > depth_floor(t, n)) continue;
          h.push_back("lambda_b" + key(b) + "_k" + std::to_string(k) + "_t" + key(t));
          h.push_back("delta_b" + key(b) + "_k" + std::to_string(k) + "_t" + key(t));
        }
      }
    }
    for (double z : c.grids.z) {
      for (int k : midrange_k(c, n)) h.push_back("dich_z" + key(z) + "_k" + std::to_string(k));
    }
  }
  if (c.wants("decoration")) {
    for (int k : c.decoration.k) {
      if (k > n) continue;
      h.push_back("rho_k" + std::to_string(k));
      h.push_back("rho_nk" + std::to_string(k));
    }
  }
  return h;
}

struct ReplicateOutput {
  std::vector<std::string> row;
  std::vector<double> atoms;  // gamma_n atoms up to atoms_top
  std::vector<std::vector<std::string>> depth_mass;  // beta, depth, mass of the overlap at integer depths
};

ReplicateOutput observe(const SurvivingPopulation& sp, const ExperimentConfig& c, std::size_t replicate) {
  const Population& pop = sp.population;
  const int n = pop.generation();
  const double mn = centering(n);
  ReplicateOutput out;
  auto& row = out.row;
  std::optional<double> ceiling;
  if (auto top = pop.position_ceiling()) ceiling = *top - mn;
  row = {std::to_string(replicate), std::to_string(sp.seed), std::to_string(sp.extinct_draws),
         std::to_string(sp.budget_draws), std::to_string(pop.size()), ceiling_cell(ceiling)};
  if (c.wants("extremal")) {
    const auto gamma = extremal_process(pop);
    const auto seen = seen_from_min(pop);
    row.push_back(format_double(gamma.min()));
    row.push_back(format_double(seen.atoms().front().value));
    row.push_back(format_double(critical_martingale(pop)));
    row.push_back(format_double(derivative_martingale(pop)));
    const auto count = gamma.count_at_most(c.extremal.atoms_top);
    out.atoms.assign(gamma.atoms().begin(), gamma.atoms().begin() + static_cast<std::ptrdiff_t>(count));
  }
  if (c.wants("overlap")) {
    for (double b : c.grids.beta) {
      const auto om = overlap_measure(pop, b);
      for (std::size_t j = 0; j < om.mass.size(); ++j) {
        if (om.mass[j] > 0.0) out.depth_mass.push_back({key(b), std::to_string(j), format_double(om.mass[j])});
      }
      row.push_back(format_double(om.total()));
      for (int k : midrange_k(c, n)) row.push_back(format_double(entangled_R(pop, b, k)));
      for (double t : c.grids.t) {
        row.push_back(format_double(overlap_tail(om, t)));
        for (int k : c.grids.k) {
          if (k > depth_floor(t, n)) continue;
          const auto ld = lambda_delta(om, k, t);
          row.push_back(format_double(ld.lambda));
          row.push_back(format_double(ld.delta));
        }
      }
    }
    for (double z : c.grids.z) {
      for (int k : midrange_k(c, n)) row.push_back(std::to_string(genealogy_dichotomy(pop, z, k)));
    }
  }
  if (c.wants("decoration")) {
    const Trapezoid f{c.decoration.f_a, c.decoration.f_b};
    for (int k : c.decoration.k) {
      if (k > n) continue;
      row.push_back(format_double(decoration_window(pop, k).integrate(f)));
      row.push_back(format_double(decoration_window(pop, n - k).integrate(f)));
    }
  }
  return out;
}

void generate_sweep(const ExperimentConfig& c, const ReproductionLaw& law, RawDir& raw) {
  for (std::size_t gi = 0; gi < c.simulation.n.size(); ++gi) {
    const int n = c.simulation.n[gi];
    const std::size_t reps = c.replicates_at(gi);
    std::vector<ReplicateOutput> results(reps);
    parallel_for(reps, c.threads, [&](std::size_t r) { results[r] = observe(simulate_surviving(law, c, n, r), c, r); });
    Table t;
    t.header = sweep_header(c, n);
    for (auto& res : results) t.rows.push_back(std::move(res.row));
    raw.write(n_file("sweep", n), t);
    if (c.wants("extremal")) {
      Table a;
      a.header = {"replicate", "value"};
      for (std::size_t r = 0; r < reps; ++r) {
        for (double x : results[r].atoms) a.rows.push_back({std::to_string(r), format_double(x)});
      }
      raw.write(n_file("atoms", n), a);
    }
    if (c.wants("overlap")) {
      Table d;
      d.header = {"replicate", "beta", "depth", "mass"};
      for (std::size_t r = 0; r < reps; ++r) {
        for (auto& cells : results[r].depth_mass) {
          cells.insert(cells.begin(), std::to_string(r));
          d.rows.push_back(std::move(cells));
        }
      }
      raw.write(n_file("overlap_depth", n), d);
    }
  }
  if (c.wants("overlap")) {
    for (std::size_t bi = 0; bi < c.grids.beta.size(); ++bi) {
      const double beta = c.grids.beta[bi];
      const StreamRng base(stream(c.seed, kOracleStream + bi));
      std::vector<double> values(c.pd_oracle_draws);
      parallel_for(values.size(), c.threads, [&](std::size_t d) {
        StreamRng rng = base.split(d);
        values[d] = sample_pd_overlap(1.0 / beta, c.pd_oracle_eps, rng).value;
      });
      Table t;
      t.header = {"draw", "sum_p2"};
      for (std::size_t d = 0; d < values.size(); ++d) t.rows.push_back({std::to_string(d), format_double(values[d])});
      raw.write("pd_oracle_b" + key(beta) + ".csv", t);
    }
  }
}

void generate_simulate(const ExperimentConfig& c, const ReproductionLaw& law, RawDir& raw, const fs::path& out_dir) {
  for (std::size_t gi = 0; gi < c.simulation.n.size(); ++gi) {
    const int n = c.simulation.n[gi];
    const std::size_t reps = c.replicates_at(gi);
    std::vector<std::vector<std::string>> rows(reps);
    fs::path pop_dir = out_dir / "populations" / ("n" + std::to_string(n));
    if (c.simulation.write_populations) fs::create_directories(pop_dir);
    parallel_for(reps, c.threads, [&](std::size_t r) {
      const auto sp = simulate_surviving(law, c, n, r);
      const auto& pop = sp.population;
      rows[r] = {std::to_string(r),
                 std::to_string(sp.seed),
                 std::to_string(sp.extinct_draws),
                 std::to_string(sp.budget_draws),
                 std::to_string(pop.size()),
                 format_double(minimum(pop).value - centering(n)),
                 format_double(critical_martingale(pop)),
                 format_double(derivative_martingale(pop))};
      if (c.simulation.write_populations) {
        const std::string stem = "r" + std::to_string(r);
        std::ofstream csv(pop_dir / (stem + ".csv"), std::ios::binary);
        pop.write_csv(csv);
        std::ofstream bin(pop_dir / (stem + ".pop"), std::ios::binary);
        pop.write_snapshot(bin);
        if (!csv || !bin) throw std::runtime_error("cannot write population files under " + pop_dir.string());
      }
    });
    Table t;
    t.header = {"replicate", "seed", "extinct_draws", "budget_draws", "frontier", "min_shift", "W", "Z"};
    t.rows = std::move(rows);
    raw.write(n_file("simulate", n), t);
  }
}

// --- limits ----------------------------------------------------------------

bool check_enabled(const ExperimentConfig& c, const std::string& name) {
  const auto& v = c.limits.checks;
  return std::find(v.begin(), v.end(), name) != v.end();
}

std::string min_cell(const PointMeasure& m) { return m.empty() ? "inf" : format_double(m.min()); }

PointMeasure sdppp_decoration(StreamRng& rng) {
  // {0, E} with E ~ Exp(1): a non-trivial decoration with minimum 0.
  return PointMeasure({0.0, -std::log(rng.uniform())});
}

void generate_limits(const ExperimentConfig& c, RawDir& raw) {
  const auto& L = c.limits;
  const std::size_t draws = L.draws;
  if (check_enabled(c, "ppp")) {
    const StreamRng base(stream(c.seed, kLimitsStream + 1));
    Table t;
    t.header = {"draw", "count", "single"};
    t.rows.resize(draws);
    parallel_for(draws, c.threads, [&](std::size_t d) {
      StreamRng rng = base.split(d);
      const auto m = sample_ppp_exponential(L.ppp_c, L.ppp_level, rng);
      t.rows[d] = {std::to_string(d), std::to_string(m.size()), m.size() == 1 ? format_double(m.min()) : "none"};
    });
    raw.write("limits_ppp.csv", t);
  }
  if (check_enabled(c, "thinning")) {
    const StreamRng base(stream(c.seed, kLimitsStream + 2));
    Table t;
    t.header = {"draw", "thinned_count", "thinned_min", "direct_count", "direct_min"};
    t.rows.resize(draws);
    parallel_for(draws, c.threads, [&](std::size_t d) {
      StreamRng rng = base.split(2 * d);
      StreamRng keep = base.split(2 * d + 1);
      const auto full = sample_ppp_exponential(L.ppp_c, L.ppp_level, rng);
      std::vector<double> kept;
      for (double x : full.atoms()) {
        if (keep.uniform() < L.thinning_q) kept.push_back(x);
      }
      const PointMeasure thinned(std::move(kept));
      StreamRng direct_rng = base.split(2 * d).split(1);
      const auto direct = sample_ppp_exponential(L.thinning_q * L.ppp_c, L.ppp_level, direct_rng);
      t.rows[d] = {std::to_string(d), std::to_string(thinned.size()), min_cell(thinned), std::to_string(direct.size()),
                   min_cell(direct)};
    });
    raw.write("limits_thinning.csv", t);
  }
  if (check_enabled(c, "sdppp")) {
    const StreamRng base(stream(c.seed, kLimitsStream + 3));
    SdpppSpec spec;
    spec.intensity_c = L.sdppp_c;
    spec.shift = L.sdppp_shift;
    spec.window_top = L.sdppp_window;
    spec.decoration = sdppp_decoration;
    SdpppSpec doubled = spec;
    doubled.intensity_c = 2.0 * L.sdppp_c;
    Table t;
    t.header = {"draw", "min", "min_superposed", "min_doubled"};
    t.rows.resize(draws);
    parallel_for(draws, c.threads, [&](std::size_t d) {
      StreamRng r1 = base.split(4 * d), r2 = base.split(4 * d + 1), r3 = base.split(4 * d + 2);
      const auto a = sample_sdppp(spec, r1).project();
      const auto b = sample_sdppp(spec, r2).project();
      const auto both = sample_sdppp(doubled, r3).project();
      const double sup = std::min(a.empty() ? INFINITY : a.min(), b.empty() ? INFINITY : b.min());
      t.rows[d] = {std::to_string(d), min_cell(a), format_double(sup), min_cell(both)};
    });
    raw.write("limits_sdppp.csv", t);
  }
  if (check_enabled(c, "cstar")) {
    const StreamRng base(stream(c.seed, kLimitsStream + 4));
    SdpppSpec spec;
    spec.intensity_c = L.cstar_c;
    spec.window_top = c.extremal.fit_b;
    std::vector<std::vector<double>> atoms(L.cstar_samples);
    parallel_for(atoms.size(), c.threads, [&](std::size_t s) {
      StreamRng rng = base.split(s);
      const auto m = sample_sdppp(spec, rng).project();
      atoms[s].assign(m.atoms().begin(), m.atoms().end());
    });
    Table t;
    t.header = {"sample", "value"};
    for (std::size_t s = 0; s < atoms.size(); ++s) {
      for (double x : atoms[s]) t.rows.push_back({std::to_string(s), format_double(x)});
    }
    raw.write("limits_cstar.csv", t);
  }
  if (check_enabled(c, "pd")) {
    Table t;
    t.header = {"draw"};
    for (double b : L.pd_beta) {
      for (double e : L.truncation_eps) t.header.push_back("sum_p2_b" + key(b) + "_e" + key(e));
    }
    t.rows.assign(draws, {});
    for (std::size_t d = 0; d < draws; ++d) t.rows[d].push_back(std::to_string(d));
    std::uint64_t col = 0;
    for (double b : L.pd_beta) {
      for (double e : L.truncation_eps) {
        // Independent streams per column so the eps comparison is a genuine two-sample check.
        const StreamRng base(stream(c.seed, kLimitsStream + 0x100 + col++));
        std::vector<double> v(draws);
        parallel_for(draws, c.threads, [&](std::size_t d) {
          StreamRng rng = base.split(d);
          v[d] = sample_pd_overlap(1.0 / b, e, rng).value;
        });
        for (std::size_t d = 0; d < draws; ++d) t.rows[d].push_back(format_double(v[d]));
      }
    }
    raw.write("limits_pd.csv", t);
  }
  if (check_enabled(c, "beta")) {
    Table t;
    t.header = {"draw"};
    const std::vector<int> ks{1, 2, 10};
    for (double b : L.pd_beta) {
      for (int k : ks) t.header.push_back("beta_b" + key(b) + "_k" + std::to_string(k));
    }
    const StreamRng base(stream(c.seed, kLimitsStream + 5));
    t.rows.resize(draws);
    parallel_for(draws, c.threads, [&](std::size_t d) {
      StreamRng rng = base.split(d);
      std::vector<std::string> row{std::to_string(d)};
      for (double b : L.pd_beta) {
        const double alpha = 1.0 / b;
        for (int k : ks) row.push_back(format_double(beta_variate(1.0 - alpha, k * alpha, rng)));
      }
      t.rows[d] = std::move(row);
    });
    raw.write("limits_beta.csv", t);
  }
  if (check_enabled(c, "gibbs")) {
    const StreamRng base(stream(c.seed, kLimitsStream + 6));
    Table t;
    t.header = {"draw", "gibbs_max", "pd_max"};
    t.rows.resize(L.gibbs_draws);
    GibbsLimitOptions opt;
    opt.tolerance = L.gibbs_tolerance;
    parallel_for(L.gibbs_draws, c.threads, [&](std::size_t d) {
      StreamRng g = base.split(2 * d);
      StreamRng p = base.split(2 * d + 1);
      const auto masses = normalized_sorted(sample_gibbs_limit(L.gibbs_beta, 1.0, 1.0, g, opt));
      const auto pd = sample_pd(1.0 / L.gibbs_beta, c.pd_oracle_eps, p);
      t.rows[d] = {std::to_string(d), format_double(masses.front()), format_double(pd.weights.front())};
    });
    raw.write("limits_gibbs.csv", t);
  }
}

// --- summaries ---------------------------------------------------------------

StatReport summary(std::string name, const MeanSe& m, std::string detail = {}) {
  StatReport r;
  r.name = std::move(name);
  r.test = "summary";
  r.estimate = m.mean;
  r.standard_error = m.se;
  r.statistic = static_cast<double>(m.count);
  r.detail = std::move(detail);
  return r;
}

StatReport ks_gate(std::string name, std::span<const double> a, std::span<const double> b, double min_p) {
  const auto ks = ks_two_sample(a, b);
  StatReport r;
  r.name = std::move(name);
  r.test = "ks";
  r.estimate = ks.p_value;
  r.statistic = ks.statistic;
  r.threshold = min_p;
  r.pass = ks.p_value > min_p;
  return r;
}

StatReport coverage(std::string name, double estimate, double se, double target, double multiplier) {
  StatReport r;
  r.name = std::move(name);
  r.test = "tolerance";
  r.estimate = estimate;
  r.standard_error = se;
  r.statistic = target;
  r.threshold = multiplier * se;
  r.pass = std::abs(estimate - target) <= multiplier * se;
  return r;
}

std::vector<double> finite_only(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) {
    if (std::isfinite(x)) out.push_back(x);
  }
  return out;
}

std::vector<StatReport> summarize_limits(const ExperimentConfig& c, const fs::path& raw) {
  const auto& L = c.limits;
  const auto& tol = c.tolerances;
  std::vector<StatReport> out;
  if (check_enabled(c, "ppp")) {
    const auto t = Table::read_csv(raw / "limits_ppp.csv");
    const auto m = mean_se(t.numbers("count"));
    out.push_back(coverage("limits.ppp_count", m.mean, m.se, L.ppp_c * std::exp(L.ppp_level), tol.se_multiplier));
    std::vector<double> singles;
    const auto col = t.column("single");
    for (const auto& row : t.rows) {
      if (row[col] != "none") singles.push_back(parse_double(row[col]));
    }
    const double level = L.ppp_level;
    const auto ks = ks_one_sample(singles, [level](double x) { return std::exp(std::min(0.0, x - level)); });
    StatReport r;
    r.name = "limits.ppp_cdf";
    r.test = "ks";
    r.estimate = ks.p_value;
    r.statistic = ks.statistic;
    r.threshold = tol.ks_p;
    r.pass = ks.p_value > tol.ks_p;
    r.detail = std::to_string(singles.size()) + " single-atom draws";
    out.push_back(r);
  }
  if (check_enabled(c, "thinning")) {
    const auto t = Table::read_csv(raw / "limits_thinning.csv");
    out.push_back(ks_gate("limits.thinning_count", t.numbers("thinned_count"), t.numbers("direct_count"), tol.ks_p));
    out.push_back(ks_gate("limits.thinning_min", finite_only(t.numbers("thinned_min")),
                          finite_only(t.numbers("direct_min")), tol.ks_p));
  }
  if (check_enabled(c, "sdppp")) {
    const auto t = Table::read_csv(raw / "limits_sdppp.csv");
    const auto mins = t.numbers("min");
    for (double x : L.void_levels) {
      if (x > L.sdppp_window) continue;
      const double p = std::exp(-L.sdppp_c * std::exp(x - L.sdppp_shift));
      double above = 0.0;
      for (double m : mins) above += m > x;
      const double n = static_cast<double>(mins.size());
      out.push_back(coverage("limits.sdppp_void[x=" + key(x) + "]", above / n, std::sqrt(p * (1.0 - p) / n), p,
                             tol.se_multiplier));
    }
    out.push_back(ks_gate("limits.sdppp_superposition", t.numbers("min_superposed"), t.numbers("min_doubled"), tol.ks_p));
  }
  if (check_enabled(c, "cstar")) {
    const auto t = Table::read_csv(raw / "limits_cstar.csv");
    std::vector<std::vector<double>> atoms(L.cstar_samples);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      atoms.at(static_cast<std::size_t>(t.number(i, "sample"))).push_back(t.number(i, "value"));
    }
    std::vector<PointMeasure> measures;
    for (auto& a : atoms) measures.emplace_back(std::move(a), c.extremal.fit_b);
    CstarOptions opt;
    opt.resamples = c.extremal.bootstrap;
    opt.seed = c.seed;
    opt.max_mean_count = c.extremal.max_mean_count;
    const auto est = estimate_cstar(measures, {c.extremal.fit_a, c.extremal.fit_b}, opt);
    StatReport r;
    r.name = "limits.cstar_recovery";
    r.test = "tolerance";
    r.estimate = est.c_hat;
    r.statistic = L.cstar_c;
    r.threshold = 0.95;
    r.pass = est.c_ci.contains(L.cstar_c);
    r.detail = "95% CI [" + format_double(est.c_ci.lo) + ", " + format_double(est.c_ci.hi) + "]";
    out.push_back(r);
    StatReport s = r;
    s.name = "limits.cstar_slope";
    s.estimate = est.slope;
    s.statistic = 1.0;
    s.pass = est.slope_ci.contains(1.0);
    s.detail = "95% CI [" + format_double(est.slope_ci.lo) + ", " + format_double(est.slope_ci.hi) + "]";
    out.push_back(s);
  }
  if (check_enabled(c, "pd")) {
    const auto t = Table::read_csv(raw / "limits_pd.csv");
    for (double b : L.pd_beta) {
      std::vector<MeanSe> per_eps;
      for (double e : L.truncation_eps) {
        per_eps.push_back(mean_se(t.numbers("sum_p2_b" + key(b) + "_e" + key(e))));
        StatReport r;
        r.name = "limits.pd_oracle[beta=" + key(b) + ",eps=" + key(e) + "]";
        r.test = "tolerance";
        r.estimate = per_eps.back().mean;
        r.standard_error = per_eps.back().se;
        r.statistic = per_eps.back().se;
        r.threshold = tol.pd_se;
        r.pass = per_eps.back().se < tol.pd_se;
        r.detail = "1 - 1/beta = " + format_double(1.0 - 1.0 / b);
        out.push_back(r);
      }
      for (std::size_t i = 1; i < per_eps.size(); ++i) {
        const double se = std::hypot(per_eps[0].se, per_eps[i].se);
        auto r = coverage("limits.pd_eps_consistency[beta=" + key(b) + ",eps=" + key(L.truncation_eps[i]) + "]",
                          per_eps[i].mean, se, per_eps[0].mean, tol.se_multiplier);
        out.push_back(r);
      }
    }
  }
  if (check_enabled(c, "beta")) {
    const auto t = Table::read_csv(raw / "limits_beta.csv");
    for (double b : L.pd_beta) {
      const double alpha = 1.0 / b;
      for (int k : {1, 2, 10}) {
        const auto m = mean_se(t.numbers("beta_b" + key(b) + "_k" + std::to_string(k)));
        const double target = (1.0 - alpha) / (1.0 - alpha + k * alpha);
        StatReport r;
        r.name = "limits.beta_mean[beta=" + key(b) + ",k=" + std::to_string(k) + "]";
        r.test = "tolerance";
        r.estimate = m.mean;
        r.standard_error = m.se;
        r.statistic = target;
        r.threshold = 1e-2;
        r.pass = std::abs(m.mean - target) <= 1e-2;
        out.push_back(r);
      }
    }
  }
  if (check_enabled(c, "gibbs")) {
    const auto t = Table::read_csv(raw / "limits_gibbs.csv");
    auto r = ks_gate("limits.gibbs_vs_pd_max", t.numbers("gibbs_max"), t.numbers("pd_max"), tol.ks_p);
    r.detail = "largest normalized mass, beta = " + key(L.gibbs_beta);
    out.push_back(r);
  }
  return out;
}

std::string tag_n(int n) { return "[n=" + std::to_string(n) + "]"; }

// Probability that a Poisson(lambda) Galton-Watson tree is extinct by generation n.
double poisson_extinct_by(double lambda, int n) {
  double q = 0.0;
  for (int g = 0; g < n; ++g) q = std::exp(lambda * (q - 1.0));
  return q;
}

void append_survival(std::vector<StatReport>& out, const ExperimentConfig& c, int n, const Table& t) {
  double extinct = 0, budget = 0;
  for (double x : t.numbers("extinct_draws")) extinct += x;
  for (double x : t.numbers("budget_draws")) budget += x;
  const double reps = static_cast<double>(t.rows.size());
  const double draws = extinct + budget + reps;
  StatReport r;
  r.name = "survival.extinct_fraction" + tag_n(n);
  r.test = "summary";
  r.estimate = extinct / draws;
  r.statistic = reps;
  r.detail = format_double(extinct) + " extinct and " + format_double(budget) + " over-budget draws for " +
             format_double(reps) + " surviving replicates";
  // The survival filter is unbiased only without pruning and budget redraws.
  if (c.law.id == "poisson_exponential" && c.simulation.mode == SimulationMode::exact && budget == 0) {
    const double q = poisson_extinct_by(c.law.lambda, n);
    const double p = extinct / (extinct + reps);
    r = coverage(r.name, p, std::sqrt(q * (1.0 - q) / (extinct + reps)), q, c.tolerances.se_multiplier);
    r.detail = "extinction by generation " + std::to_string(n) + " against the Galton-Watson iterate";
  }
  out.push_back(r);
}

std::vector<PointMeasure> atoms_measures(const Table& atoms, const Table& sweep_t, double atoms_top) {
  const std::size_t reps = sweep_t.rows.size();
  std::vector<std::vector<double>> v(reps);
  for (std::size_t i = 0; i < atoms.rows.size(); ++i) {
    v.at(static_cast<std::size_t>(atoms.number(i, "replicate"))).push_back(atoms.number(i, "value"));
  }
  std::vector<PointMeasure> out;
  const auto col = sweep_t.column("ceiling");
  for (std::size_t r = 0; r < reps; ++r) {
    double top = atoms_top;
    if (sweep_t.rows[r][col] != "none") top = std::min(top, parse_double(sweep_t.rows[r][col]));
    out.emplace_back(std::move(v[r]), top);
  }
  return out;
}

std::vector<StatReport> summarize_sweep(const ExperimentConfig& c, const fs::path& raw) {
  const auto& tol = c.tolerances;
  const auto& ns = c.simulation.n;
  std::vector<StatReport> out;
  std::vector<Table> tables;
  for (int n : ns) tables.push_back(Table::read_csv(raw / n_file("sweep", n)));

  for (std::size_t gi = 0; gi < ns.size(); ++gi) append_survival(out, c, ns[gi], tables[gi]);

  if (c.wants("extremal")) {
    std::vector<std::vector<double>> shifts;
    for (std::size_t gi = 0; gi < ns.size(); ++gi) {
      const auto& t = tables[gi];
      shifts.push_back(t.numbers("min_shift"));
      out.push_back(summary("extremal.min_shift" + tag_n(ns[gi]), mean_se(shifts.back())));
      std::size_t nonzero = 0;
      for (double x : t.numbers("seen_min")) nonzero += x != 0.0;
      StatReport r;
      r.name = "extremal.seen_from_min_zero" + tag_n(ns[gi]);
      r.test = "identity";
      r.estimate = static_cast<double>(nonzero);
      r.statistic = static_cast<double>(t.rows.size());
      r.pass = nonzero == 0;
      r.detail = "instances whose minimum atom is not exactly 0";
      out.push_back(r);
    }
    if (ns.size() >= 3) {
      const auto near = ks_two_sample(shifts[ns.size() - 2], shifts.back()).statistic;
      const auto far = ks_two_sample(shifts.front(), shifts.back()).statistic;
      StatReport r;
      r.name = "extremal.min_law_tightness";
      r.test = "ks";
      r.estimate = near;
      r.statistic = far;
      r.pass = near < far;
      r.detail = "KS(n=" + std::to_string(ns[ns.size() - 2]) + ", n=" + std::to_string(ns.back()) +
                 ") vs KS(n=" + std::to_string(ns.front()) + ", n=" + std::to_string(ns.back()) + ")";
      out.push_back(r);
    }
  }

  if (c.experiment == ExperimentKind::estimate_cstar) {
    for (std::size_t gi = 0; gi < ns.size(); ++gi) {
      const auto atoms = Table::read_csv(raw / n_file("atoms", ns[gi]));
      const auto measures = atoms_measures(atoms, tables[gi], c.extremal.atoms_top);
      CstarOptions opt;
      opt.resamples = c.extremal.bootstrap;
      opt.seed = c.seed;
      opt.max_mean_count = c.extremal.max_mean_count;
      const auto est = estimate_cstar(measures, {c.extremal.fit_a, c.extremal.fit_b}, opt);
      StatReport r;
      r.name = "extremal.cstar" + tag_n(ns[gi]);
      r.test = "summary";
      r.estimate = est.c_hat;
      r.statistic = est.slope;
      r.detail = "c 95% CI [" + format_double(est.c_ci.lo) + ", " + format_double(est.c_ci.hi) + "]; slope 95% CI [" +
                 format_double(est.slope_ci.lo) + ", " + format_double(est.slope_ci.hi) + "]";
      out.push_back(r);
    }
  }

  if (c.wants("overlap")) {
    for (double b : c.grids.beta) {
      const auto oracle = mean_se(Table::read_csv(raw / ("pd_oracle_b" + key(b) + ".csv")).numbers("sum_p2"));
      out.push_back(summary("overlap.pd_oracle[beta=" + key(b) + "]", oracle));
      std::size_t mass_bad = 0, total_instances = 0;
      for (const auto& t : tables) {
        for (double m : t.numbers("total_b" + key(b))) {
          ++total_instances;
          mass_bad += !(std::abs(m - 1.0) <= tol.identity);
        }
      }
      StatReport mass;
      mass.name = "overlap.total_mass[beta=" + key(b) + "]";
      mass.test = "identity";
      mass.estimate = static_cast<double>(mass_bad);
      mass.statistic = static_cast<double>(total_instances);
      mass.threshold = tol.identity;
      mass.pass = mass_bad == 0;
      out.push_back(mass);

      for (double tt : c.grids.t) {
        const std::string bt = "beta=" + key(b) + ",t=" + key(tt);
        std::vector<double> dist;
        std::size_t checked = 0, violations = 0;
        for (std::size_t gi = 0; gi < ns.size(); ++gi) {
          const auto& t = tables[gi];
          const auto tails = t.numbers("tail_b" + key(b) + "_t" + key(tt));
          const auto m = mean_se(tails);
          out.push_back(summary("overlap.tail[" + bt + ",n=" + std::to_string(ns[gi]) + "]", m));
          dist.push_back(std::abs(m.mean - oracle.mean));
          for (int k : c.grids.k) {
            if (k > depth_floor(tt, ns[gi])) continue;
            const auto lam = t.numbers("lambda_b" + key(b) + "_k" + std::to_string(k) + "_t" + key(tt));
            const auto del = t.numbers("delta_b" + key(b) + "_k" + std::to_string(k) + "_t" + key(tt));
            for (std::size_t r = 0; r < tails.size(); ++r) {
              ++checked;
              const bool ok = lam[r] - del[r] <= tails[r] + 1e-12 && tails[r] <= lam[r] + 1e-12;
              violations += !ok;
            }
          }
        }
        StatReport sw;
        sw.name = "overlap.sandwich[" + bt + "]";
        sw.test = "identity";
        sw.estimate = static_cast<double>(violations);
        sw.statistic = static_cast<double>(checked);
        sw.threshold = 1e-12;
        sw.pass = violations == 0;
        sw.detail = "Lambda - Delta <= tail <= Lambda on every instance";
        out.push_back(sw);
        if (dist.size() >= 2) {
          bool decreasing = true;
          for (std::size_t i = 1; i < dist.size(); ++i) decreasing = decreasing && dist[i] < dist[i - 1];
          StatReport drift;
          drift.name = "overlap.drift[" + bt + "]";
          drift.test = "trend";
          drift.estimate = dist.back();
          drift.statistic = dist.front();
          drift.pass = decreasing;
          drift.detail = "|mean tail - oracle| along n: " + join_values(dist);
          out.push_back(drift);
        }
        StatReport fin;
        fin.name = "overlap.final_distance[" + bt + "]";
        fin.test = "tolerance";
        fin.estimate = dist.back();
        fin.threshold = tol.pd_distance;
        fin.pass = dist.back() <= tol.pd_distance;
        fin.detail = "at n=" + std::to_string(ns.back());
        out.push_back(fin);
      }
    }
    for (double z : c.grids.z) {
      for (std::size_t gi = 0; gi < ns.size(); ++gi) {
        const auto& t = tables[gi];
        const auto ks = midrange_k(c, ns[gi]);
        std::vector<double> frac;
        for (int k : ks) {
          std::size_t positive = 0;
          for (double v : t.numbers("dich_z" + key(z) + "_k" + std::to_string(k))) positive += v > 0.0;
          frac.push_back(static_cast<double>(positive) / static_cast<double>(t.rows.size()));
        }
        if (frac.size() < 2) continue;
        auto r = trend_report("overlap.dichotomy[z=" + key(z) + ",n=" + std::to_string(ns[gi]) + "]", ks, frac,
                              tol.dichotomy_factor);
        if (gi + 1 != ns.size()) {
          r.test = "summary";
          r.pass = true;
        }
        out.push_back(r);
      }
    }
  }

  if (c.wants("decoration")) {
    for (std::size_t gi = 0; gi < ns.size(); ++gi) {
      const auto& t = tables[gi];
      DecorationSamples s;
      s.n = ns[gi];
      for (int k : c.decoration.k) {
        if (k > s.n) continue;
        s.k.push_back(k);
        s.rho_k.push_back(t.numbers("rho_k" + std::to_string(k)));
        s.rho_nk.push_back(t.numbers("rho_nk" + std::to_string(k)));
      }
      if (s.k.size() < 2) continue;
      auto reports = decoration_stabilization(s, std::min<std::size_t>(20, t.rows.size()));
      if (gi + 1 != ns.size()) {
        for (auto& r : reports) {
          r.test = "summary";
          r.pass = true;
        }
      }
      out.insert(out.end(), reports.begin(), reports.end());
    }
  }
  return out;
}

std::vector<StatReport> summarize_simulate(const ExperimentConfig& c, const fs::path& raw) {
  std::vector<StatReport> out;
  for (int n : c.simulation.n) {
    const auto t = Table::read_csv(raw / n_file("simulate", n));
    append_survival(out, c, n, t);
    out.push_back(summary("simulate.min_shift" + tag_n(n), mean_se(t.numbers("min_shift"))));
    out.push_back(summary("simulate.frontier" + tag_n(n), mean_se(t.numbers("frontier"))));
    out.push_back(summary("simulate.derivative_martingale" + tag_n(n), mean_se(t.numbers("Z"))));
  }
  return out;
}

std::vector<StatReport> summarize(const ExperimentConfig& c, const fs::path& raw) {
  std::vector<StatReport> out;
  if (simulation_based(c.experiment)) out = summarize_validation(Table::read_csv(raw / "validate.csv"));
  std::vector<StatReport> more;
  if (c.experiment == ExperimentKind::simulate) more = summarize_simulate(c, raw);
  if (sweep(c.experiment)) more = summarize_sweep(c, raw);
  if (c.experiment == ExperimentKind::limits) more = summarize_limits(c, raw);
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

std::string reports_text(const std::vector<StatReport>& reports) {
  std::ostringstream ss;
  write_reports_json(ss, reports);
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_intensity_plot(const ExperimentConfig& c, int n, const Table& sweep_t, const fs::path& raw,
                          const fs::path& dir) {
  const auto measures = atoms_measures(Table::read_csv(raw / n_file("atoms", n)), sweep_t, c.extremal.atoms_top);
  const std::size_t g = 16;
  std::vector<double> xs, means;
  for (std::size_t i = 0; i < g; ++i) {
    const double x = c.extremal.fit_a + (c.extremal.fit_b - c.extremal.fit_a) * static_cast<double>(i) / (g - 1);
    double sum = 0.0;
    for (const auto& m : measures) sum += static_cast<double>(m.count_at_most(x));
    xs.push_back(x);
    means.push_back(sum / static_cast<double>(measures.size()));
  }
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < g; ++i) {
    if (means[i] > 0.0) {
      fx.push_back(xs[i]);
      fy.push_back(std::log(means[i]));
    }
  }
  std::optional<LineFit> fit;
  if (fx.size() >= 2) fit = least_squares(fx, fy);
  Table t;
  t.header = {"x", "mean_count", "fitted_mean"};
  for (std::size_t i = 0; i < g; ++i) {
    t.rows.push_back({format_double(xs[i]), format_double(means[i]),
                      fit ? format_double(std::exp(fit->intercept + fit->slope * xs[i])) : "none"});
  }
  std::ofstream out(dir / n_file("intensity", n), std::ios::binary);
  t.write_csv(out);
}

void write_plots(const ExperimentConfig& c, const fs::path& out_dir, const fs::path& raw) {
  if (!sweep(c.experiment) && c.experiment != ExperimentKind::simulate) return;
  fs::create_directories(out_dir / "plots");
  for (int n : c.simulation.n) {
    const auto t = Table::read_csv(raw / n_file(c.experiment == ExperimentKind::simulate ? "simulate" : "sweep", n));
    if (!t.has_column("min_shift")) continue;
    auto v = t.numbers("min_shift");
    std::sort(v.begin(), v.end());
    Table e;
    e.header = {"min_shift", "ecdf"};
    for (std::size_t i = 0; i < v.size(); ++i) {
      e.rows.push_back({format_double(v[i]), format_double(static_cast<double>(i + 1) / static_cast<double>(v.size()))});
    }
    std::ofstream out(out_dir / "plots" / n_file("ecdf_min_shift", n), std::ios::binary);
    e.write_csv(out);
    if (c.experiment == ExperimentKind::estimate_cstar) write_intensity_plot(c, n, t, raw, out_dir / "plots");
  }
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const fs::path out_dir = config.output;
  const fs::path raw_dir = out_dir / "raw";
  std::error_code ec;
  fs::remove_all(raw_dir, ec);
  fs::create_directories(raw_dir);
  RawDir raw{raw_dir, {}};

  if (simulation_based(config.experiment)) {
    const auto law = make_law(config.law);
    const auto validation = validate_boundary(*law, config.validation_samples, config.tolerances.boundary,
                                              stream(config.seed, kValidateStream));
    raw.write("validate.csv", validation_table(validation));
    if (!validation.pass && config.experiment != ExperimentKind::validate) {
      const auto reports = summarize_validation(Table::read_csv(raw_dir / "validate.csv"));
      write_text(out_dir / "reports.json", reports_text(reports));
      throw LawValidationFailed("law '" + law->id() + "' fails boundary validation; see reports.json");
    }
    if (config.experiment == ExperimentKind::simulate) generate_simulate(config, *law, raw, out_dir);
    if (sweep(config.experiment)) generate_sweep(config, *law, raw);
  } else {
    generate_limits(config, raw);
  }

  RunResult result;
  result.output = out_dir;
  result.reports = summarize(config, raw_dir);
  result.pass = all_pass(result.reports);
  write_text(out_dir / "reports.json", reports_text(result.reports));
  write_text(out_dir / "config.yaml", to_yaml(config));
  write_plots(config, out_dir, raw_dir);

  json seeds = json::object();
  for (int n : config.simulation.n) seeds[std::to_string(n)] = derive_key(mix64(config.seed), static_cast<std::uint64_t>(n));
  json manifest = {{"tool", "brwlab"},
                   {"version", BRWLAB_VERSION},
                   {"experiment", to_string(config.experiment)},
                   {"config_hash", config_hash(config)},
                   {"seed", config.seed},
                   {"grid_seeds", seeds},
                   {"raw_files", raw.files},
                   {"config", to_yaml(config)}};
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

ReplayResult replay(const fs::path& output_dir) {
  const auto manifest = json::parse(read_text(output_dir / "manifest.json"));
  const auto config = parse_config(manifest.at("config").get<std::string>());
  if (manifest.at("config_hash").get<std::string>() != config_hash(config)) {
    throw std::runtime_error("manifest config hash does not match its config");
  }
  ReplayResult out;
  out.reports = summarize(config, output_dir / "raw");
  out.pass = all_pass(out.reports);
  out.identical = reports_text(out.reports) == read_text(output_dir / "reports.json");
  return out;
}

}  // namespace brwlab
