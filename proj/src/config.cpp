#include "mbdeform/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mbdeform {

namespace {

using json = nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "scenario",        "n",
      "monitor.radius",  "monitor.band",
      "monitor.slope",   "monitor.floor_scale",
      "monitor.schedule", "sor.lambda",
      "sor.tol",         "sor.max_iters",
      "deform.dt",       "deform.substeps",
      "deform.integrator", "deform.max_move",
      "output.dir",
      "output.cadence",  "output.slice_z",
  };
  return keys;
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t b = 0; b + 1 < byte && b < text.size(); ++b) {
    if (text[b] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

template <class T>
T read(const json& doc, const std::string& key, const T& fallback, const std::string& source) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(source + ": key '" + key + "' has the wrong type (" + it->dump() + ")");
  }
}

SphereSchedule read_schedule(const json& doc, double radius, const SphereSchedule& fallback,
                             const std::string& source) {
  auto it = doc.find("monitor.schedule");
  if (it == doc.end()) return SphereSchedule(radius, fallback.breakpoints());
  const std::string where = source + ": key 'monitor.schedule'";
  if (!it->is_array() || it->empty()) {
    throw ConfigError(where + " must be a non-empty array of [l, x, y, z]");
  }
  std::vector<SphereSchedule::Breakpoint> points;
  for (const auto& row : *it) {
    if (!row.is_array() || row.size() != 4) {
      throw ConfigError(where + " entries must be [l, x, y, z], got " + row.dump());
    }
    try {
      points.push_back({row[0].get<double>(),
                        Vec3{row[1].get<double>(), row[2].get<double>(), row[3].get<double>()}});
    } catch (const json::exception&) {
      throw ConfigError(where + " entries must be numeric, got " + row.dump());
    }
  }
  try {
    return SphereSchedule(radius, std::move(points));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = text.find_first_not_of(" \t\r\n") == std::string::npos ? json::object()
                                                                  : json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": parse error at " + line_column(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(source + ": top level must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (known_keys().count(key) == 0) throw ConfigError(source + ": unknown key '" + key + "'");
  }

  RunConfig cfg;
  const std::string scenario = read<std::string>(doc, "scenario", "backstep", source);
  if (scenario == "backstep") {
    cfg.scenario = Scenario::Backstep;
  } else if (scenario == "single_block") {
    cfg.scenario = Scenario::SingleBlock;
  } else {
    throw ConfigError(source + ": key 'scenario' must be 'backstep' or 'single_block'");
  }

  cfg.n = read<int>(doc, "n", 20, source);
  if (cfg.n < 2) throw ConfigError(source + ": key 'n' must be >= 2");

  const SphereSchedule default_schedule =
      cfg.scenario == Scenario::Backstep
          ? SphereSchedule::backstep()
          : SphereSchedule(0.2, {{0.0, {0.5, 0.5, 0.5}}, {40.0, {0.5, 0.5, 0.5}}});
  const double radius = read<double>(doc, "monitor.radius", default_schedule.radius(), source);
  if (!(radius >= 0.0)) throw ConfigError(source + ": key 'monitor.radius' must be >= 0");
  MonitorSpec& mon = cfg.settings.monitor;
  mon.schedule = read_schedule(doc, radius, default_schedule, source);
  mon.band = read<double>(doc, "monitor.band", mon.band, source);
  mon.slope = read<double>(doc, "monitor.slope", mon.slope, source);
  mon.floor_scale = read<double>(doc, "monitor.floor_scale", mon.floor_scale, source);
  try {
    mon.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }

  const double lambda = read<double>(doc, "sor.lambda", 1.5, source);
  if (!(lambda > 0.0 && lambda < 2.0)) {
    throw ConfigError(source + ": key 'sor.lambda' must lie in (0, 2), got " +
                      doc["sor.lambda"].dump());
  }
  try {
    cfg.settings.solver = SolverConfig(lambda, read<double>(doc, "sor.tol", 1e-8, source),
                                       read<int>(doc, "sor.max_iters", 20000, source));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }

  DeformConfig& def = cfg.settings.deform;
  def.dt_step1 = read<double>(doc, "deform.dt", def.dt_step1, source);
  def.substeps_per_l = read<int>(doc, "deform.substeps", def.substeps_per_l, source);
  const std::string integrator = read<std::string>(doc, "deform.integrator", "euler", source);
  if (integrator == "euler") {
    def.integrator = Integrator::Euler;
  } else if (integrator == "rk4") {
    def.integrator = Integrator::Rk4;
  } else {
    throw ConfigError(source + ": key 'deform.integrator' must be 'euler' or 'rk4'");
  }
  def.max_move = read<double>(doc, "deform.max_move", def.max_move, source);
  try {
    def.validate(mon.step1_end);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }

  cfg.output_dir = read<std::string>(doc, "output.dir", cfg.output_dir.string(), source);
  cfg.cadence = read<int>(doc, "output.cadence", 1, source);
  if (cfg.cadence < 1) throw ConfigError(source + ": key 'output.cadence' must be >= 1");
  cfg.slice_z = read<double>(doc, "output.slice_z", 0.5, source);
  if (!(cfg.slice_z >= 0.0 && cfg.slice_z <= 1.0)) {
    throw ConfigError(source + ": key 'output.slice_z' must lie in [0, 1]");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

MultiBlockDomain build_domain(const RunConfig& config) {
  return config.scenario == Scenario::Backstep ? build_backstep(config.n)
                                               : build_unit_block(config.n);
}

}  // namespace mbdeform
