#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "sphereflock/diagnostics.hpp"
#include "sphereflock/errors.hpp"
#include "sphereflock/integrator.hpp"

namespace sphereflock {

inline constexpr std::string_view kTimeseriesHeader =
    "t,E,E_K,E_C,v_max,dissipation,flock_metric,antipodal_margin,diameter";
inline constexpr std::string_view kSnapshotHeader = "t,agent,x,y,z,vx,vy,vz";

/// 17 significant digits: round-trips every double exactly.
inline std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

inline void write_timeseries(std::ostream& out, const Trajectory& traj) {
  out << kTimeseriesHeader << '\n';
  for (const auto& s : traj.samples) {
    const DiagnosticsRecord& d = s.diag;
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", d.t, d.energy,
                       d.kinetic, d.configuration, d.v_max, d.dissipation, d.flock_metric, d.antipodal_margin,
                       d.diameter);
  }
}

inline void write_snapshots(std::ostream& out, const Trajectory& traj, std::size_t every) {
  out << kSnapshotHeader << '\n';
  for (std::size_t k = 0; k < traj.samples.size(); k += every) {
    const Ensemble& e = traj.samples[k].state;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const AgentState& a = e.agents[i];
      out << fmt::format("{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", e.t, i, a.x.x(), a.x.y(),
                         a.x.z(), a.v.x(), a.v.y(), a.v.z());
    }
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

/// Columns of a CSV file with a header row, keyed by header name.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(std::string_view name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return columns[k];
    throw Error("missing column '" + std::string(name) + "'");
  }
};

inline CsvTable read_numeric_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error("'" + path.string() + "' is empty");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  table.columns.resize(table.header.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k >= table.columns.size()) throw Error(fmt::format("row {} of '{}' has too many fields", row, path.string()));
      try {
        table.columns[k].push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(fmt::format("row {} of '{}' has a non-numeric field", row, path.string()));
      }
      ++k;
    }
    if (k != table.columns.size()) throw Error(fmt::format("row {} of '{}' is short", row, path.string()));
  }
  return table;
}

/// Minimal static line chart. With log_y, non-positive values are dropped.
inline std::string svg_line_plot(const std::vector<double>& xs, const std::vector<double>& ys, std::string_view title,
                                 std::string_view y_label, bool log_y) {
  constexpr double width = 640, height = 400, left = 70, right = 20, top = 40, bottom = 50;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < std::min(xs.size(), ys.size()); ++k) {
    if (!std::isfinite(xs[k]) || !std::isfinite(ys[k])) continue;
    if (log_y) {
      if (ys[k] > 0.0) pts.emplace_back(xs[k], std::log10(ys[k]));
    } else {
      pts.emplace_back(xs[k], ys[k]);
    }
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pts.empty()) {
    x0 = x1 = pts.front().first;
    y0 = y1 = pts.front().second;
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{3}</text>\n"
      "<rect x=\"{4}\" y=\"{5}\" width=\"{6}\" height=\"{7}\" fill=\"none\" stroke=\"black\"/>\n",
      width, height, width / 2, title, left, top, pw, ph);
  for (int tick = 0; tick <= 4; ++tick) {
    const double fx = x0 + (x1 - x0) * tick / 4.0;
    const double fy = y0 + (y1 - y0) * tick / 4.0;
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" "
                       "text-anchor=\"middle\">{:.3g}</text>\n",
                       sx(fx), top + ph + 16, fx);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" "
                       "text-anchor=\"end\">{}</text>\n",
                       left - 6, sy(fy) + 4, log_y ? fmt::format("1e{:.2g}", fy) : fmt::format("{:.3g}", fy));
  }
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"12\" "
                     "text-anchor=\"middle\">t</text>\n",
                     left + pw / 2, height - 10);
  svg += fmt::format("<text x=\"14\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"12\" "
                     "transform=\"rotate(-90 14 {:.1f})\" text-anchor=\"middle\">{}</text>\n",
                     top + ph / 2, top + ph / 2, y_label);
  if (!pts.empty()) {
    svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) svg += fmt::format("{:.2f},{:.2f} ", sx(x), sy(y));
    svg += "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

/// Renders energy.svg and flock_metric.svg from a timeseries.csv in dir.
inline std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& dir) {
  const CsvTable ts = read_numeric_csv(dir / "timeseries.csv");
  const auto& t = ts.column("t");
  std::vector<std::filesystem::path> written{dir / "energy.svg", dir / "flock_metric.svg"};
  write_text_file(written[0], svg_line_plot(t, ts.column("E"), "Total energy", "E", false));
  write_text_file(written[1], svg_line_plot(t, ts.column("flock_metric"), "Flocking metric", "flock_metric", true));
  return written;
}

}  // namespace sphereflock
