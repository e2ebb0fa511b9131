#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sphereflock/commands.hpp"
#include "sphereflock/parallel.hpp"

namespace sf = sphereflock;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> dt, t_end, sigma;
  std::optional<std::size_t> n;
  std::string out;
  bool plots = false;
};

// Command-line flags win over the config file.
void apply(const Overrides& o, sf::RunConfig& cfg) {
  if (o.seed) cfg.scenario.seed = cfg.params.seed = *o.seed;
  if (o.dt) cfg.params.dt = *o.dt;
  if (o.t_end) cfg.params.t_end = *o.t_end;
  if (o.sigma) {
    cfg.params.sigma = *o.sigma;
    cfg.sigma_factor.reset();
  }
  if (o.n) cfg.scenario.n = cfg.params.n = *o.n;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.plots) cfg.emit_plots = true;
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "RNG seed for the scenario");
  cmd->add_option("--dt", o.dt, "Time step");
  cmd->add_option("--t-end", o.t_end, "Final time");
  cmd->add_option("--sigma", o.sigma, "Bonding strength (replaces sigma_factor)");
  cmd->add_option("--n", o.n, "Number of agents");
}

}  // namespace

int main(int argc, char** argv) {
  sf::WorkerCap cap(sf::worker_limit_from_env());

  CLI::App app{"Cucker-Smale flocking on the unit sphere"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sf::kVersion));

  std::string config_path;

  Overrides sim;
  auto* simulate = app.add_subcommand("simulate", "Run one configuration and write CSV output and a manifest");
  simulate->add_option("--config", config_path, "JSON run configuration");
  simulate->add_option("--out", sim.out, "Output directory");
  simulate->add_flag("--plots", sim.plots, "Also write SVG plots");
  add_overrides(simulate, sim);

  std::string suite = "all";
  std::uint64_t verify_seed = 0;
  auto* verify = app.add_subcommand("verify", "Run property suites and print a pass/fail table");
  verify->add_option("name,--suite", suite, "Suite name or 'all'");
  verify->add_option("--seed", verify_seed, "Seed for randomized suites");

  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run a grid of configurations and write sweep.csv");
  sweep->add_option("--config", config_path, "JSON sweep description {\"base\": ..., \"grid\": ...}")->required();
  sweep->add_option("--out", sweep_out, "Output directory")->required();

  std::string plot_dir;
  auto* plot = app.add_subcommand("plot", "Render SVG plots from a run directory");
  plot->add_option("--out", plot_dir, "Run directory containing timeseries.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sf::exit_code::usage;
  }

  if (*simulate) {
    sf::RunConfig cfg;
    try {
      if (!config_path.empty()) cfg = sf::load_config(config_path);
      apply(sim, cfg);
      cfg.validate();
    } catch (const sf::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return sf::exit_code::config;
    }
    return sf::cmd_simulate(cfg, std::cout, std::cerr);
  }
  if (*verify) return sf::cmd_verify(suite, verify_seed, std::cout, std::cerr);
  if (*sweep) {
    sf::SweepGrid grid;
    try {
      grid = sf::sweep_from_json(sf::read_json_file(config_path));
    } catch (const sf::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return sf::exit_code::config;
    }
    return sf::cmd_sweep(grid, sweep_out, std::cout, std::cerr);
  }
  return sf::cmd_plot(plot_dir, std::cout, std::cerr);
}
