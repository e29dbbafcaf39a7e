// spherecs <experiment> --config <path> [--out <dir>] [--seed <u64>] [--threads <n>]
//
// Exit status: 0 success, 2 configuration or usage error, 3 failure while running.
// SPHERECS_THREADS sets the worker count when --threads is absent.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include "spherecs/config.hpp"
#include "spherecs/experiments.hpp"
#include "spherecs/parallel.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling pattern design and sparse recovery on S2 and SO(3)"};
  std::string experiment;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  app.add_option("experiment", experiment,
                 "coherence_compare | optimize_pattern | phase_transition | igrf_demo | wigner_forward_demo")
      ->required();
  app.add_option("--config", config_path, "flat key = value experiment file")->required();
  app.add_option("--out", out_dir, "output directory (default out/<experiment>)");
  app.add_option("--seed", seed, "base seed, overrides the config");
  app.add_option("--threads", threads, "worker threads, overrides SPHERECS_THREADS")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  spherecs::ExperimentConfig config;
  try {
    const auto kind = spherecs::parse_experiment_kind(experiment);
    config = spherecs::load_config(config_path, kind);
    if (seed) config.seed = *seed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "spherecs: config error: %s: %s\n", config_path.c_str(), e.what());
    return kConfigError;
  }
  if (threads) spherecs::set_thread_count(*threads);
  const std::filesystem::path out = out_dir.empty() ? std::filesystem::path("out") / experiment : std::filesystem::path(out_dir);

  try {
    const auto summary = spherecs::run_experiment(config, out);
    std::fputs(summary.text().c_str(), stdout);
  } catch (const spherecs::ConfigError& e) {
    std::fprintf(stderr, "spherecs: config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "spherecs: %s failed: %s\n", experiment.c_str(), e.what());
    return kRuntimeError;
  }
  return 0;
}
