// rotwave: pseudo-spectral tools for the dispersive reformulation of the
// rotating Euler equations.
//
// Subcommands: verify, decay, simulate, lifespan, norms.
// Exit codes: 0 success, 1 assertion/health failure, 2 usage error.
#include <cstdio>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "rotwave/config.hpp"

using namespace rotwave;

int main(int argc, char** argv) {
  CLI::App app{"rotwave: rotating-Euler spectral toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite, snapshot_path;
  long long seed = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value configuration file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed override");
  };

  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify);
  verify->add_option("--suite", suite,
                     "suite: all, bands, formulation, kernels, phase-identities, "
                     "sampling, equivalence")
      ->required();

  CLI::App* decay = app.add_subcommand("decay", "dispersive decay study");
  add_common(decay);

  CLI::App* simulate = app.add_subcommand("simulate", "run a simulation");
  add_common(simulate);

  CLI::App* lifespan = app.add_subcommand("lifespan", "lifespan proxy sweep");
  add_common(lifespan);

  CLI::App* norms = app.add_subcommand("norms", "print norms of a snapshot");
  add_common(norms);
  norms->add_option("snapshot", snapshot_path, "snapshot file (*.rweu)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg.apply(parse_config_file(config_path));
    if (!out_dir.empty()) {
      cfg.out_dir = out_dir;
      cfg.sim.out_dir = out_dir;
    }
    if (seed >= 0) cfg.sim.seed = static_cast<uint64_t>(seed);
    if (!suite.empty()) cfg.suite = suite;

    if (verify->parsed()) return cmd_verify(cfg);
    if (decay->parsed()) return cmd_decay(cfg);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (lifespan->parsed()) return cmd_lifespan(cfg);
    if (norms->parsed()) return cmd_norms(cfg, snapshot_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
