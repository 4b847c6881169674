// brwlab: command-line front end for the experiment harness.
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "brwlab/config.hpp"
#include "brwlab/harness.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kStatFailure = 1;
constexpr int kError = 2;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
};

void print_reports(const std::vector<brwlab::StatReport>& reports) {
  for (const auto& r : reports) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  estimate=" << r.estimate;
    if (r.standard_error > 0.0) std::cout << " se=" << r.standard_error;
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::cout << '\n';
  }
}

brwlab::ExperimentConfig resolve(const std::string& experiment, const CommonFlags& flags) {
  brwlab::ExperimentConfig c = flags.config.empty() ? brwlab::ExperimentConfig{} : brwlab::load_config(flags.config);
  c.experiment = brwlab::parse_experiment(experiment);
  if (const char* env = std::getenv("BRW_OUT"); env && *env) c.output = env;
  if (const char* env = std::getenv("BRW_THREADS"); env && *env) {
    try {
      c.threads = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      throw std::invalid_argument("BRW_THREADS: not a thread count: " + std::string(env));
    }
  }
  if (flags.seed) c.seed = *flags.seed;
  if (flags.out) c.output = *flags.out;
  if (flags.threads) c.threads = *flags.threads;
  return c;
}

int run(const std::string& experiment, const CommonFlags& flags) {
  const auto config = resolve(experiment, flags);
  const auto result = brwlab::run_experiment(config);
  print_reports(result.reports);
  std::cout << (result.pass ? "all checks passed" : "some checks failed") << "; output in " << result.output.string()
            << '\n';
  return result.pass ? kPass : kStatFailure;
}

int run_replay(const std::string& dir) {
  const auto result = brwlab::replay(dir);
  print_reports(result.reports);
  std::cout << (result.identical ? "reports reproduced byte for byte" : "recomputed reports differ from reports.json")
            << '\n';
  return result.identical && result.pass ? kPass : kStatFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Branching random walk simulation and verification experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BRWLAB_VERSION);

  CommonFlags flags;
  std::string selected;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"validate", "check the reproduction law against the boundary-case conditions"},
      {"simulate", "simulate surviving populations and record minima and martingales"},
      {"extremal", "extremal process and minimum-law tightness along the n grid"},
      {"decoration", "decoration windows and their stabilization in k"},
      {"overlap", "Gibbs overlaps, sandwich bounds and genealogy dichotomy"},
      {"limits", "internal checks of the limit-object samplers"},
      {"estimate-cstar", "fit the exponential intensity of the leaders"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "YAML experiment file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--out", flags.out, "output directory (env BRW_OUT)");
    sub->add_option("--threads", flags.threads, "worker threads (env BRW_THREADS)")->check(CLI::PositiveNumber);
    sub->callback([&selected, n = name] { selected = n; });
  }
  std::string replay_dir;
  auto* replay = app.add_subcommand("replay", "recompute every report of a finished run from its raw files");
  replay->add_option("dir", replay_dir, "output directory of the run")->required()->check(CLI::ExistingDirectory);
  replay->callback([&selected] { selected = "replay"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kError;
  }

  try {
    if (selected == "replay") return run_replay(replay_dir);
    return run(selected, flags);
  } catch (const brwlab::LawValidationFailed& e) {
    std::cerr << "brwlab: " << e.what() << '\n';
    return kStatFailure;
  } catch (const std::exception& e) {
    std::cerr << "brwlab: " << e.what() << '\n';
    return kError;
  }
}
