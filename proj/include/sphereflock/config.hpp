#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sphereflock/ensemble.hpp"
#include "sphereflock/errors.hpp"
#include "sphereflock/scenarios.hpp"
#include "sphereflock/weight.hpp"

namespace sphereflock {

using Json = nlohmann::json;

/// Everything needed to reproduce one run.
struct RunConfig {
  ScenarioSpec scenario;
  SimParams params;
  /// When set, sigma is chosen so that sigma = factor * N^2 E(0) / 2 for the
  /// generated initial data.
  std::optional<double> sigma_factor;
  std::string output_dir;
  bool emit_plots = false;
  /// Write agent states every this many recorded samples.
  std::size_t snapshot_every = 10;

  void validate() const {
    params.validate();
    if (scenario.n != params.n) throw ConfigError("scenario.n and params.n disagree");
    if (snapshot_every < 1) throw ConfigError("snapshot_every must be at least 1");
    if (sigma_factor && !(*sigma_factor > 0.0)) throw ConfigError("sigma_factor must be positive");
  }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

// Rejects keys outside `known` so that typos surface as errors.
inline void require_known_keys(const Json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
void read_if(const Json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

inline Json to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

inline Vec3 vec3_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(where + " must be a 3-element array");
  try {
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  } catch (const Json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace detail

inline Json to_json(const CommWeight& w) {
  Json j{{"kind", std::string(w.name())}};
  if (w.kind() == CommWeight::Kind::linear) j["kappa"] = w.kappa();
  if (w.kind() == CommWeight::Kind::table) {
    j["nodes"] = w.nodes();
    j["values"] = w.values();
  }
  return j;
}

inline CommWeight weight_from_json(const Json& j) {
  detail::require_known_keys(j, {"kind", "kappa", "nodes", "values"}, "params.weight");
  std::string kind = "quadratic";
  detail::read_if(j, "kind", kind, "params.weight");
  try {
    if (kind == "quadratic") return CommWeight::quadratic();
    if (kind == "linear") {
      double kappa = 1.0;
      detail::read_if(j, "kappa", kappa, "params.weight");
      return CommWeight::linear(kappa);
    }
    if (kind == "table") {
      std::vector<double> nodes, values;
      detail::read_if(j, "nodes", nodes, "params.weight");
      detail::read_if(j, "values", values, "params.weight");
      return CommWeight::table(std::move(nodes), std::move(values));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("params.weight: ") + e.what());
  }
  throw ConfigError("unknown weight kind '" + kind + "'");
}

inline Json to_json(const ScenarioSpec& s) {
  return Json{{"kind", std::string(to_string(s.kind))},
              {"n", s.n},
              {"seed", s.seed},
              {"speed", s.speed},
              {"center", detail::to_json(s.center)},
              {"radius", s.radius},
              {"phases", s.phases},
              {"time", s.time}};
}

inline ScenarioSpec scenario_from_json(const Json& j) {
  const std::string where = "scenario";
  detail::require_known_keys(j, {"kind", "n", "seed", "speed", "center", "radius", "phases", "time"}, where);
  ScenarioSpec s;
  std::string kind(to_string(s.kind));
  detail::read_if(j, "kind", kind, where);
  s.kind = scenario_kind_from_string(kind);
  detail::read_if(j, "n", s.n, where);
  detail::read_if(j, "seed", s.seed, where);
  detail::read_if(j, "speed", s.speed, where);
  if (j.contains("center")) s.center = detail::vec3_from_json(j.at("center"), where + ".center");
  detail::read_if(j, "radius", s.radius, where);
  detail::read_if(j, "phases", s.phases, where);
  detail::read_if(j, "time", s.time, where);
  return s;
}

inline Json to_json(const SimParams& p) {
  return Json{{"n", p.n},
              {"sigma", p.sigma},
              {"weight", to_json(p.weight)},
              {"dt", p.dt},
              {"t_end", p.t_end},
              {"record_every", p.record_every},
              {"seed", p.seed},
              {"tolerances", {{"antipodal", p.tol.antipodal}, {"coincident", p.tol.coincident}, {"unit", p.tol.unit}}}};
}

inline SimParams params_from_json(const Json& j) {
  const std::string where = "params";
  detail::require_known_keys(j, {"n", "sigma", "weight", "dt", "t_end", "record_every", "seed", "tolerances"}, where);
  SimParams p;
  detail::read_if(j, "n", p.n, where);
  detail::read_if(j, "sigma", p.sigma, where);
  if (j.contains("weight")) p.weight = weight_from_json(j.at("weight"));
  detail::read_if(j, "dt", p.dt, where);
  detail::read_if(j, "t_end", p.t_end, where);
  detail::read_if(j, "record_every", p.record_every, where);
  detail::read_if(j, "seed", p.seed, where);
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    detail::require_known_keys(t, {"antipodal", "coincident", "unit"}, "params.tolerances");
    detail::read_if(t, "antipodal", p.tol.antipodal, "params.tolerances");
    detail::read_if(t, "coincident", p.tol.coincident, "params.tolerances");
    detail::read_if(t, "unit", p.tol.unit, "params.tolerances");
  }
  return p;
}

inline Json to_json(const RunConfig& c) {
  Json j{{"scenario", to_json(c.scenario)},
         {"params", to_json(c.params)},
         {"output_dir", c.output_dir},
         {"emit_plots", c.emit_plots},
         {"snapshot_every", c.snapshot_every}};
  if (c.sigma_factor) j["sigma_factor"] = *c.sigma_factor;
  return j;
}

/// Missing fields take their defaults. When only one of scenario.n and
/// params.n is given, the other follows it; the same holds for the seeds.
inline RunConfig config_from_json(const Json& j) {
  detail::require_known_keys(j, {"scenario", "params", "sigma_factor", "output_dir", "emit_plots", "snapshot_every"},
                             "config");
  RunConfig c;
  const Json empty = Json::object();
  const Json& js = j.contains("scenario") ? j.at("scenario") : empty;
  const Json& jp = j.contains("params") ? j.at("params") : empty;
  c.scenario = scenario_from_json(js);
  c.params = params_from_json(jp);
  if (js.contains("n") && !jp.contains("n")) c.params.n = c.scenario.n;
  if (jp.contains("n") && !js.contains("n")) c.scenario.n = c.params.n;
  if (js.contains("seed") && !jp.contains("seed")) c.params.seed = c.scenario.seed;
  if (jp.contains("seed") && !js.contains("seed")) c.scenario.seed = c.params.seed;
  if (c.scenario.kind == ScenarioSpec::Kind::circular_exact && !js.contains("n") && !jp.contains("n")) {
    c.scenario.n = c.scenario.phases.size();
    c.params.n = c.scenario.n;
  }
  if (j.contains("sigma_factor") && !j.at("sigma_factor").is_null()) {
    double f = 0.0;
    detail::read_if(j, "sigma_factor", f, "config");
    c.sigma_factor = f;
  }
  detail::read_if(j, "output_dir", c.output_dir, "config");
  detail::read_if(j, "emit_plots", c.emit_plots, "config");
  detail::read_if(j, "snapshot_every", c.snapshot_every, "config");
  c.validate();
  return c;
}

inline std::string serialize(const RunConfig& c) { return to_json(c).dump(2); }

inline RunConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline RunConfig load_config(const std::string& path) { return config_from_json(read_json_file(path)); }

}  // namespace sphereflock
