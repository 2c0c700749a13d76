#include "lacsim/config.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

namespace lacsim::cli {

namespace {

using nlohmann::json;

constexpr std::string_view kEchoPrefix = "# config: ";

[[noreturn]] void fail(const std::string& key, const std::string& message) {
  throw ConfigError(fmt::format("config key '{}': {}", key, message));
}

void reject_unknown(const json& object, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (std::string_view a : allowed) known |= (key == a);
    if (!known) {
      fail(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

const json& require_object(const json& parent, const std::string& key) {
  if (!parent.contains(key)) fail(key, "required section is missing");
  const json& value = parent.at(key);
  if (!value.is_object()) fail(key, "expected an object");
  return value;
}

double read_real(const json& object, const std::string& where, const std::string& key,
                 double fallback, bool required = false) {
  const std::string path = where + "." + key;
  if (!object.contains(key)) {
    if (required) fail(path, "required value is missing");
    return fallback;
  }
  const json& v = object.at(key);
  if (!v.is_number()) fail(path, fmt::format("expected a number, got {}", v.type_name()));
  const double value = v.get<double>();
  if (!std::isfinite(value)) fail(path, "expected a finite number");
  return value;
}

double read_non_negative(const json& object, const std::string& where, const std::string& key,
                         double fallback) {
  const double value = read_real(object, where, key, fallback);
  if (value < 0.0) {
    fail(where + "." + key, fmt::format("expected a finite number >= 0, got {}", value));
  }
  return value;
}

long read_integer(const json& object, const std::string& where, const std::string& key,
                  long fallback, long minimum, bool required = false) {
  const std::string path = where + "." + key;
  if (!object.contains(key)) {
    if (required) fail(path, "required value is missing");
    return fallback;
  }
  const json& v = object.at(key);
  if (!v.is_number_integer()) fail(path, fmt::format("expected an integer, got {}", v.type_name()));
  const long value = v.get<long>();
  if (value < minimum) fail(path, fmt::format("expected an integer >= {}, got {}", minimum, value));
  return value;
}

bool read_bool(const json& object, const std::string& where, const std::string& key,
               bool fallback) {
  if (!object.contains(key)) return fallback;
  const json& v = object.at(key);
  if (!v.is_boolean()) fail(where + "." + key, "expected true or false");
  return v.get<bool>();
}

std::string read_string(const json& object, const std::string& where, const std::string& key,
                        std::string fallback, bool required = false) {
  const std::string path = where.empty() ? key : where + "." + key;
  if (!object.contains(key)) {
    if (required) fail(path, "required value is missing");
    return fallback;
  }
  const json& v = object.at(key);
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

Subcommand parse_subcommand(const std::string& s) {
  if (s == "levels") return Subcommand::Levels;
  if (s == "trace") return Subcommand::Trace;
  if (s == "spectrum") return Subcommand::Spectrum;
  if (s == "fmsweep") return Subcommand::FmSweep;
  fail("subcommand", fmt::format("expected one of levels, trace, spectrum, fmsweep; got '{}'", s));
}

spinops::SpinSystemSpec parse_system(const json& root) {
  const json& s = require_object(root, "system");
  reject_unknown(s, "system", {"kind", "v_perturbation", "a_iso", "d_dd", "theta_dd"});
  const std::string kind = read_string(s, "system", "kind", "", true);
  spinops::SpinSystemSpec spec;
  if (kind == "single_spin") {
    spec.kind = spinops::SystemKind::SingleSpin;
  } else if (kind == "two_spin_isotropic") {
    spec.kind = spinops::SystemKind::TwoSpinIsotropic;
  } else if (kind == "two_spin_dipolar") {
    spec.kind = spinops::SystemKind::TwoSpinDipolar;
  } else {
    fail("system.kind", fmt::format(
                            "expected single_spin, two_spin_isotropic or two_spin_dipolar; got '{}'",
                            kind));
  }
  spec.v_perturbation = read_real(s, "system", "v_perturbation", 0.0);
  spec.a_iso = read_real(s, "system", "a_iso", 0.0);
  spec.d_dd = read_real(s, "system", "d_dd", 0.0);
  spec.theta_dd = read_real(s, "system", "theta_dd", 0.0);
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    fail("system", fmt::format("inconsistent parameters for kind '{}': {}", kind, e.what()));
  }
  return spec;
}

liouville::RelaxationSpec parse_relaxation(const json& root) {
  liouville::RelaxationSpec relax;
  if (!root.contains("relaxation")) return relax;
  const json& r = require_object(root, "relaxation");
  reject_unknown(r, "relaxation", {"r1", "r2", "pump_j", "pump_damps_coherence"});
  relax.r1 = read_non_negative(r, "relaxation", "r1", 0.0);
  relax.r2 = read_non_negative(r, "relaxation", "r2", 0.0);
  relax.pump_j = read_non_negative(r, "relaxation", "pump_j", 0.0);
  relax.pump_damps_coherence = read_bool(r, "relaxation", "pump_damps_coherence", true);
  return relax;
}

periodic::Sampling parse_sampling(const json& d) {
  const std::string s = read_string(d, "drive", "sampling", "midpoint");
  if (s == "midpoint") return periodic::Sampling::Midpoint;
  if (s == "left_endpoint") return periodic::Sampling::LeftEndpoint;
  fail("drive.sampling", fmt::format("expected midpoint or left_endpoint, got '{}'", s));
}

// Which drive keys a subcommand accepts; swept quantities are not allowed.
periodic::DriveSpec parse_drive(const json& root, Subcommand sub) {
  const json& d = require_object(root, "drive");
  periodic::DriveSpec drive;
  switch (sub) {
    case Subcommand::Trace:
      reject_unknown(d, "drive", {"omega0", "omega1", "f_mod", "n_steps", "sampling"});
      drive.omega0 = read_real(d, "drive", "omega0", 0.0);
      drive.n_steps = read_integer(d, "drive", "n_steps", 0, 2, true);
      drive.f_mod = read_real(d, "drive", "f_mod", 1.0, true);
      break;
    case Subcommand::Spectrum:
      reject_unknown(d, "drive", {"omega1", "f_mod", "sampling"});
      drive.f_mod = read_real(d, "drive", "f_mod", 1.0, true);
      break;
    case Subcommand::FmSweep:
      reject_unknown(d, "drive", {"omega1", "sampling"});
      break;
    case Subcommand::Levels:
      break;
  }
  drive.omega1 = read_real(d, "drive", "omega1", 0.0, true);
  drive.sampling = parse_sampling(d);
  if (drive.f_mod <= 0.0) fail("drive.f_mod", "expected a positive number");
  return drive;
}

std::vector<double> parse_grid(const json& root, const std::string& key, bool positive) {
  if (!root.contains(key)) fail(key, "required grid is missing");
  const json& g = root.at(key);
  std::vector<double> grid;
  if (g.is_array()) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g[i].is_number()) fail(fmt::format("{}[{}]", key, i), "expected a number");
      grid.push_back(g[i].get<double>());
    }
  } else if (g.is_object()) {
    reject_unknown(g, key, {"start", "stop", "count", "spacing"});
    const double start = read_real(g, key, "start", 0.0, true);
    const double stop = read_real(g, key, "stop", 0.0, true);
    const long count = read_integer(g, key, "count", 0, 1, true);
    const std::string spacing = read_string(g, key, "spacing", "linear");
    if (spacing != "linear" && spacing != "log") {
      fail(key + ".spacing", fmt::format("expected linear or log, got '{}'", spacing));
    }
    if (spacing == "log" && (start <= 0.0 || stop <= 0.0)) {
      fail(key, "log spacing needs positive start and stop");
    }
    for (long i = 0; i < count; ++i) {
      const double frac = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      grid.push_back(spacing == "linear"
                         ? start + (stop - start) * frac
                         : std::exp(std::log(start) + (std::log(stop) - std::log(start)) * frac));
    }
    if (count > 1) grid.back() = stop;
  } else {
    fail(key, "expected an array of numbers or a {start, stop, count, spacing} object");
  }
  if (grid.empty()) fail(key, "grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) fail(fmt::format("{}[{}]", key, i), "expected a finite number");
    if (positive && grid[i] <= 0.0) fail(fmt::format("{}[{}]", key, i), "expected a positive number");
    if (i > 0 && !(grid[i] > grid[i - 1])) fail(key, "grid must be strictly increasing");
  }
  return grid;
}

sweep::ConvergenceSpec parse_convergence(const json& root) {
  sweep::ConvergenceSpec c;
  if (!root.contains("convergence")) return c;
  const json& j = require_object(root, "convergence");
  reject_unknown(j, "convergence", {"target_rel_change", "n_start", "n_max"});
  c.target_rel_change = read_real(j, "convergence", "target_rel_change", c.target_rel_change);
  if (c.target_rel_change <= 0.0) fail("convergence.target_rel_change", "expected a positive number");
  c.n_start = read_integer(j, "convergence", "n_start", c.n_start, 4);
  c.n_max = read_integer(j, "convergence", "n_max", c.n_max, 4);
  if (c.n_max < c.n_start) fail("convergence.n_max", "must be >= convergence.n_start");
  return c;
}

InitialState parse_initial_state(const std::string& s) {
  if (s == "bright") return InitialState::Bright;
  if (s == "dark") return InitialState::Dark;
  if (s == "mixed") return InitialState::Mixed;
  fail("trace.initial_state", fmt::format("expected bright, dark or mixed, got '{}'", s));
}

const char* to_string(InitialState s) {
  switch (s) {
    case InitialState::Bright:
      return "bright";
    case InitialState::Dark:
      return "dark";
    case InitialState::Mixed:
      return "mixed";
  }
  return "bright";
}

void forbid(const json& root, Subcommand sub, std::initializer_list<std::string_view> keys) {
  for (std::string_view k : keys) {
    if (root.contains(std::string(k))) {
      fail(std::string(k), fmt::format("not used by subcommand '{}'", to_string(sub)));
    }
  }
}

}  // namespace

const char* to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Levels:
      return "levels";
    case Subcommand::Trace:
      return "trace";
    case Subcommand::Spectrum:
      return "spectrum";
    case Subcommand::FmSweep:
      return "fmsweep";
  }
  return "levels";
}

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(root, "", {"subcommand", "output", "gamma_for_units", "system", "relaxation",
                            "drive", "grid", "inner_grid", "convergence", "trace"});

  RunConfig config;
  config.subcommand = parse_subcommand(read_string(root, "", "subcommand", "", true));
  config.output_path = read_string(root, "", "output", "");
  if (root.contains("gamma_for_units")) {
    const double g = read_real(root, "", "gamma_for_units", 1.0);
    if (g <= 0.0) fail("gamma_for_units", "expected a positive number");
    config.gamma_for_units = g;
  }
  config.system = parse_system(root);

  switch (config.subcommand) {
    case Subcommand::Levels:
      forbid(root, config.subcommand, {"relaxation", "drive", "inner_grid", "convergence", "trace"});
      config.grid = parse_grid(root, "grid", false);
      break;
    case Subcommand::Trace: {
      forbid(root, config.subcommand, {"grid", "inner_grid", "convergence"});
      config.relaxation = parse_relaxation(root);
      config.drive = parse_drive(root, config.subcommand);
      if (root.contains("trace")) {
        const json& t = require_object(root, "trace");
        reject_unknown(t, "trace", {"n_periods", "initial_state"});
        config.trace_periods = read_integer(t, "trace", "n_periods", 1, 1);
        config.initial_state =
            parse_initial_state(read_string(t, "trace", "initial_state", "bright"));
      }
      break;
    }
    case Subcommand::Spectrum:
      forbid(root, config.subcommand, {"inner_grid", "trace"});
      config.relaxation = parse_relaxation(root);
      config.drive = parse_drive(root, config.subcommand);
      config.grid = parse_grid(root, "grid", false);
      config.convergence = parse_convergence(root);
      break;
    case Subcommand::FmSweep:
      forbid(root, config.subcommand, {"trace"});
      config.relaxation = parse_relaxation(root);
      config.drive = parse_drive(root, config.subcommand);
      config.grid = parse_grid(root, "grid", true);
      config.inner_grid = root.contains("inner_grid") ? parse_grid(root, "inner_grid", false)
                                                      : sweep::default_inner_grid(config.system);
      config.convergence = parse_convergence(root);
      break;
  }
  return config;
}

std::string effective_config_json(const RunConfig& c) {
  json root;
  root["subcommand"] = to_string(c.subcommand);
  if (!c.output_path.empty()) root["output"] = c.output_path;
  if (c.gamma_for_units) root["gamma_for_units"] = *c.gamma_for_units;
  root["system"] = {{"kind", spinops::to_string(c.system.kind)},
                    {"v_perturbation", c.system.v_perturbation},
                    {"a_iso", c.system.a_iso},
                    {"d_dd", c.system.d_dd},
                    {"theta_dd", c.system.theta_dd}};
  const json relaxation = {{"r1", c.relaxation.r1},
                           {"r2", c.relaxation.r2},
                           {"pump_j", c.relaxation.pump_j},
                           {"pump_damps_coherence", c.relaxation.pump_damps_coherence}};
  const json convergence = {{"target_rel_change", c.convergence.target_rel_change},
                            {"n_start", c.convergence.n_start},
                            {"n_max", c.convergence.n_max}};
  switch (c.subcommand) {
    case Subcommand::Levels:
      root["grid"] = c.grid;
      break;
    case Subcommand::Trace:
      root["relaxation"] = relaxation;
      root["drive"] = {{"omega0", c.drive.omega0},
                       {"omega1", c.drive.omega1},
                       {"f_mod", c.drive.f_mod},
                       {"n_steps", c.drive.n_steps},
                       {"sampling", periodic::to_string(c.drive.sampling)}};
      root["trace"] = {{"n_periods", c.trace_periods},
                       {"initial_state", to_string(c.initial_state)}};
      break;
    case Subcommand::Spectrum:
      root["relaxation"] = relaxation;
      root["drive"] = {{"omega1", c.drive.omega1},
                       {"f_mod", c.drive.f_mod},
                       {"sampling", periodic::to_string(c.drive.sampling)}};
      root["grid"] = c.grid;
      root["convergence"] = convergence;
      break;
    case Subcommand::FmSweep:
      root["relaxation"] = relaxation;
      root["drive"] = {{"omega1", c.drive.omega1},
                       {"sampling", periodic::to_string(c.drive.sampling)}};
      root["grid"] = c.grid;
      root["inner_grid"] = c.inner_grid;
      root["convergence"] = convergence;
      break;
  }
  return root.dump();
}

std::optional<std::string> extract_config_echo(std::string_view csv_text) {
  std::size_t pos = 0;
  while (pos < csv_text.size()) {
    const std::size_t end = csv_text.find('\n', pos);
    const std::string_view line =
        csv_text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    if (line.empty() || line.front() != '#') break;
    if (line.substr(0, kEchoPrefix.size()) == kEchoPrefix) {
      return std::string(line.substr(kEchoPrefix.size()));
    }
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return std::nullopt;
}

}  // namespace lacsim::cli
