// SPDX-License-Identifier: Apache-2.0
//
// Benchmark harness for the staggered-grid elastic/acoustic Helmholtz
// solvers. Subcommands mirror the experiment kinds; every run writes
// results.csv (fixed header) under the output directory.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "helmix/experiments.hpp"
#include "helmix/parallel.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, CommonArgs& args, std::optional<std::uint64_t>& seed_slot) {
  sub->add_option("--config", args.config, "JSON experiment configuration")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out", args.out, "output directory (overrides config)");
  sub->add_option("--threads", args.threads, "worker threads for sweeps and matvecs")
      ->check(CLI::PositiveNumber);
  sub->add_option_function<std::uint64_t>(
      "--seed", [&seed_slot](std::uint64_t s) { seed_slot = s; },
      "seed override for synthetic models");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"helmix: elastic Helmholtz multigrid benchmark harness"};
  app.require_subcommand(1);

  CommonArgs args;
  const char* names[] = {"solve", "lambda-sweep", "acoustic-vs-elastic", "levels-study",
                         "check-3d"};
  const char* descs[] = {
      "single forward solve (optionally dumping wavefields)",
      "constant-coefficient sweep: standard vs mixed formulation",
      "acoustic (shear velocity) vs elastic iteration counts",
      "three vs four multigrid levels across shift values",
      "small 3D convergence trend check"};
  for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(names[i], descs[i]), args, args.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  helmix::set_thread_count(args.threads);

  helmix::ExperimentConfig cfg;
  try {
    cfg = helmix::load_experiment_config(args.config);
    const helmix::ExperimentKind requested = helmix::experiment_from_name(sub);
    if (!cfg.kind_explicit)
      cfg.kind = requested;  // config may omit "experiment"; the subcommand decides
    else if (cfg.kind != requested)
      throw helmix::ConfigError("config experiment kind does not match subcommand '" + sub + "'");
    if (!args.out.empty()) cfg.out_dir = args.out;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  try {
    helmix::run_experiment(cfg, args.seed);
  } catch (const helmix::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
