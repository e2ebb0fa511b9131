#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <tbb/parallel_for.h>

#include "sphereflock/checks.hpp"
#include "sphereflock/config.hpp"
#include "sphereflock/diagnostics.hpp"
#include "sphereflock/integrator.hpp"
#include "sphereflock/io.hpp"
#include "sphereflock/scenarios.hpp"
#include "sphereflock/verify.hpp"

namespace sphereflock {

inline constexpr std::string_view kVersion = "0.1.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 1;
inline constexpr int admissibility = 2;
inline constexpr int blowup = 3;
inline constexpr int usage = 64;
}  // namespace exit_code

/// Initial data, resolved parameters and trajectory of one configured run.
struct RunOutcome {
  Ensemble initial;
  SimParams params;
  Trajectory traj;
  double e0 = 0.0;
};

/// Builds the scenario, resolves sigma_factor and integrates. Throws
/// ConfigError / DomainError for bad configs and AdmissibilityError for bad
/// initial data; blowups come back in traj.status.
inline RunOutcome execute(const RunConfig& cfg) {
  cfg.validate();
  RunOutcome out;
  try {
    out.initial = build_scenario(cfg.scenario);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  out.params = cfg.params;
  if (cfg.sigma_factor) out.params.sigma = threshold_sigma(out.initial, *cfg.sigma_factor);
  out.e0 = energy(out.initial, out.params.sigma).total;
  out.traj = simulate(out.initial, out.params);
  return out;
}

namespace detail {

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline Json check_json(bool pass, Json observed) { return Json{{"pass", pass}, {"observed", std::move(observed)}}; }

}  // namespace detail

inline Json build_manifest(const RunConfig& cfg, const RunOutcome& run, double wall_seconds, const std::string& started) {
  const Trajectory& traj = run.traj;
  const DiagnosticsRecord& last = traj.back().diag;
  const auto cons = constraint_check(traj, 1e-12);
  const auto mono = energy_monotone_check(traj, 1e-10);
  const auto speed = speed_bound_check(traj, 1e-8);
  const auto verdict = flocking_verdict(traj, 1e-3);

  Json resolved = to_json(cfg);
  resolved["params"]["sigma"] = run.params.sigma;
  Json checks{{"constraints", detail::check_json(cons.pass, {{"max_norm_residual", cons.max_norm_residual},
                                                             {"max_tangency_residual", cons.max_tangency_residual}})},
              {"energy_monotone", detail::check_json(mono.pass, mono.max_increase_per_step)},
              {"speed_bound", detail::check_json(speed.pass, {{"max_speed", speed.max_speed}, {"bound", speed.bound}})},
              {"flocking", detail::check_json(verdict.flocking, {{"worst_tail_metric", verdict.worst_tail_metric},
                                                                {"min_tail_margin", verdict.min_tail_margin}})}};
  if (run.params.sigma > 0.0) {
    const auto diam = diameter_bound_check(traj, 1e-8);
    checks["diameter_bound"] = detail::check_json(
        diam.pass, {{"max_diameter_sq", diam.max_diameter_sq}, {"bound", diam.diameter_sq_bound}});
  }
  double min_margin = 2.0;
  for (const auto& s : traj.samples) min_margin = std::min(min_margin, s.diag.antipodal_margin);

  return Json{{"version", std::string(kVersion)},
              {"config", resolved},
              {"started_at", started},
              {"wall_clock_seconds", wall_seconds},
              {"status", traj.ok() ? "ok" : "blowup"},
              {"message", traj.message},
              {"summary",
               {{"E0", run.e0},
                {"sigma", run.params.sigma},
                {"flocking_condition", flocking_condition(run.params.n, run.e0, run.params.sigma)},
                {"samples", traj.samples.size()},
                {"final_t", last.t},
                {"final_energy", last.energy},
                {"final_flock_metric", last.flock_metric},
                {"final_antipodal_margin", last.antipodal_margin},
                {"min_antipodal_margin", min_margin},
                {"final_v_max", last.v_max}}},
              {"checks", checks}};
}

/// Runs one configuration and writes timeseries.csv, snapshots.csv,
/// manifest.json and optionally the SVG plots into cfg.output_dir.
inline int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  if (cfg.output_dir.empty()) {
    err << "error: no output directory given (--out DIR or output_dir in the config)\n";
    return exit_code::config;
  }
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec || !fs::is_directory(cfg.output_dir)) {
    err << "error: cannot create output directory '" << cfg.output_dir << "'\n";
    return exit_code::config;
  }

  const std::string started = detail::utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome run;
  try {
    run = execute(cfg);
  } catch (const AdmissibilityError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::admissibility;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::config;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path dir(cfg.output_dir);
  try {
    std::ostringstream ts, snaps;
    write_timeseries(ts, run.traj);
    write_snapshots(snaps, run.traj, cfg.snapshot_every);
    write_text_file(dir / "timeseries.csv", ts.str());
    write_text_file(dir / "snapshots.csv", snaps.str());
    write_text_file(dir / "manifest.json", build_manifest(cfg, run, wall, started).dump(2) + "\n");
    if (cfg.emit_plots) emit_plots(dir);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::config;
  }

  const DiagnosticsRecord& last = run.traj.back().diag;
  out << fmt::format("samples {}  t {:.6g}  E {:.6e}  flock_metric {:.6e}  antipodal_margin {:.6f}\n",
                     run.traj.samples.size(), last.t, last.energy, last.flock_metric, last.antipodal_margin);
  if (!run.traj.ok()) {
    err << "error: blowup: " << run.traj.message << '\n';
    return exit_code::blowup;
  }
  return exit_code::ok;
}

/// Runs one suite or "all"; exit status is the number of failed suites
/// (capped at 63), or 64 for an unknown suite name.
inline int cmd_verify(const std::string& suite, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  if (!is_suite(suite)) {
    err << "error: unknown suite '" << suite << "'; choose one of: all";
    for (const auto& n : suite_names()) err << ", " << n;
    err << '\n';
    return exit_code::usage;
  }
  std::vector<std::string> selected;
  if (suite == "all")
    selected = suite_names();
  else
    selected.push_back(suite);

  out << fmt::format("{:<12} {:<40} {:>13}  {:<16} {}\n", "suite", "check", "observed", "threshold", "result");
  int failed = 0;
  for (const auto& name : selected) {
    const SuiteResult r = run_suite(name, seed);
    print_suite(out, r);
    if (!r.pass()) ++failed;
  }
  out << fmt::format("{} of {} suites passed\n", selected.size() - static_cast<std::size_t>(failed), selected.size());
  return std::min(failed, 63);
}

/// Cartesian grid over sigma (or sigma_factor), n and seed around a base run.
struct SweepGrid {
  RunConfig base;
  std::vector<double> sigma;
  std::vector<double> sigma_factor;
  std::vector<std::size_t> n;
  std::vector<std::uint64_t> seed;

  static constexpr std::size_t kMaxCells = 4096;

  std::size_t cell_count() const {
    if (sigma.empty() && sigma_factor.empty() && n.empty() && seed.empty()) return 0;
    auto len = [](std::size_t k) { return std::max<std::size_t>(k, 1); };
    return len(sigma.size() + sigma_factor.size()) * len(n.size()) * len(seed.size());
  }

  /// Configuration of cell k; sigma varies fastest, then n, then seed.
  RunConfig cell(std::size_t k) const {
    RunConfig c = base;
    const std::size_t ns = std::max<std::size_t>(sigma.size() + sigma_factor.size(), 1);
    const std::size_t nn = std::max<std::size_t>(n.size(), 1);
    const std::size_t is = k % ns, in = (k / ns) % nn, iseed = k / (ns * nn);
    if (!sigma.empty()) {
      c.params.sigma = sigma[is];
      c.sigma_factor.reset();
    } else if (!sigma_factor.empty()) {
      c.sigma_factor = sigma_factor[is];
    }
    if (!n.empty()) c.scenario.n = c.params.n = n[in];
    if (!seed.empty()) c.scenario.seed = c.params.seed = seed[iseed];
    return c;
  }
};

inline SweepGrid sweep_from_json(const Json& j) {
  detail::require_known_keys(j, {"base", "grid"}, "sweep");
  SweepGrid g;
  g.base = config_from_json(j.contains("base") ? j.at("base") : Json::object());
  const Json empty = Json::object();
  const Json& grid = j.contains("grid") ? j.at("grid") : empty;
  detail::require_known_keys(grid, {"sigma", "sigma_factor", "n", "seed"}, "sweep.grid");
  detail::read_if(grid, "sigma", g.sigma, "sweep.grid");
  detail::read_if(grid, "sigma_factor", g.sigma_factor, "sweep.grid");
  detail::read_if(grid, "n", g.n, "sweep.grid");
  detail::read_if(grid, "seed", g.seed, "sweep.grid");
  if (!g.sigma.empty() && !g.sigma_factor.empty()) throw ConfigError("sweep.grid: give sigma or sigma_factor, not both");
  return g;
}

inline constexpr std::string_view kSweepHeader =
    "cell,sigma,n,seed,E0,flocking_condition,final_flock_metric,final_antipodal_margin,min_antipodal_margin,status";

struct SweepRow {
  std::size_t cell = 0;
  double sigma = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double e0 = std::nan("");
  bool condition = false;
  double final_metric = std::nan("");
  double final_margin = std::nan("");
  double min_margin = std::nan("");
  std::string status = "ok";
};

inline std::string format_row(const SweepRow& r) {
  return fmt::format("{},{:.17g},{},{},{:.17g},{},{:.17g},{:.17g},{:.17g},{}\n", r.cell, r.sigma, r.n, r.seed, r.e0,
                     r.condition ? "true" : "false", r.final_metric, r.final_margin, r.min_margin, r.status);
}

/// Runs every grid cell (cells in parallel) and writes sweep.csv plus one
/// sub-directory per cell. Failed cells are reported in their row.
inline int cmd_sweep(const SweepGrid& grid, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  const std::size_t cells = grid.cell_count();
  if (cells == 0) {
    err << "error: sweep grid is empty\n";
    return exit_code::config;
  }
  if (cells > SweepGrid::kMaxCells) {
    err << fmt::format("error: sweep has {} cells, limit is {}\n", cells, SweepGrid::kMaxCells);
    return exit_code::config;
  }
  if (out_dir.empty()) {
    err << "error: no output directory given\n";
    return exit_code::config;
  }
  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "cells", ec);
  if (ec) {
    err << "error: cannot create output directory '" << out_dir << "'\n";
    return exit_code::config;
  }

  std::vector<SweepRow> rows(cells);
  tbb::parallel_for(std::size_t{0}, cells, [&](std::size_t k) {
    SweepRow& row = rows[k];
    RunConfig cfg = grid.cell(k);
    row.cell = k;
    row.sigma = cfg.params.sigma;
    row.n = cfg.params.n;
    row.seed = cfg.params.seed;
    cfg.output_dir = (fs::path(out_dir) / "cells" / fmt::format("cell_{:04d}", k)).string();
    try {
      const RunOutcome run = execute(cfg);
      row.sigma = run.params.sigma;
      row.e0 = run.e0;
      row.condition = flocking_condition(run.params.n, run.e0, run.params.sigma);
      row.final_metric = run.traj.back().diag.flock_metric;
      row.final_margin = run.traj.back().diag.antipodal_margin;
      row.min_margin = 2.0;
      for (const auto& s : run.traj.samples) row.min_margin = std::min(row.min_margin, s.diag.antipodal_margin);
      if (!run.traj.ok()) row.status = "blowup";
      fs::create_directories(cfg.output_dir);
      std::ostringstream ts;
      write_timeseries(ts, run.traj);
      write_text_file(fs::path(cfg.output_dir) / "timeseries.csv", ts.str());
      write_text_file(fs::path(cfg.output_dir) / "config.json", serialize(cfg) + "\n");
    } catch (const AdmissibilityError&) {
      row.status = "admissibility_error";
    } catch (const Error&) {
      row.status = "config_error";
    } catch (const std::exception&) {
      row.status = "error";
    }
  });

  std::string csv = std::string(kSweepHeader) + "\n";
  for (const auto& r : rows) csv += format_row(r);
  try {
    write_text_file(fs::path(out_dir) / "sweep.csv", csv);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::config;
  }

  // Spread of the final flocking metric across seeds, per (sigma, n) group.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> groups;
  const std::size_t ns = std::max<std::size_t>(grid.sigma.size() + grid.sigma_factor.size(), 1);
  const std::size_t nn = std::max<std::size_t>(grid.n.size(), 1);
  for (const auto& r : rows)
    if (r.status == "ok") groups[{r.cell % ns, (r.cell / ns) % nn}].push_back(r.final_metric);
  out << fmt::format("{} cells written to {}\n", cells, (fs::path(out_dir) / "sweep.csv").string());
  for (const auto& [key, values] : groups) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double sd = values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    std::string label;
    if (!grid.sigma.empty())
      label = fmt::format("sigma={:g}", grid.sigma[key.first]);
    else if (!grid.sigma_factor.empty())
      label = fmt::format("sigma_factor={:g}", grid.sigma_factor[key.first]);
    else
      label = fmt::format("sigma={:g}", grid.base.params.sigma);
    label += fmt::format(" n={}", grid.n.empty() ? grid.base.params.n : grid.n[key.second]);
    out << fmt::format("{}: {} seeds, final flock_metric mean {:.4e} sd {:.4e} min {:.4e} max {:.4e}\n", label,
                       values.size(), mean, sd, *lo, *hi);
  }
  return exit_code::ok;
}

inline int cmd_plot(const std::string& dir, std::ostream& out, std::ostream& err) {
  if (dir.empty()) {
    err << "error: no run directory given (--out DIR)\n";
    return exit_code::config;
  }
  try {
    for (const auto& p : emit_plots(dir)) out << "wrote " << p.string() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::config;
  }
  return exit_code::ok;
}

}  // namespace sphereflock
