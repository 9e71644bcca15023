#pragma once

// Batch front end: strict JSON run configuration, the phase-shifts,
// cross-section and deflection commands, and their CSV/JSON artifacts.
// Commands build their whole output in memory; files are written afterwards
// by a single writer.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scatter2d/classical.hpp"
#include "scatter2d/error.hpp"
#include "scatter2d/potential.hpp"
#include "scatter2d/quantum.hpp"
#include "scatter2d/semiclassical.hpp"

namespace scatter2d::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3, kPartialResults = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 0;

  std::vector<double> values() const { return numerics::linspace(min, max, static_cast<std::size_t>(count)); }
};

struct PotentialSpec {
  std::string type;  // gaussian | appendix_b | tabulated
  double U0 = 0.0, a = 1.0;
  double A = 1.0, R_c = 1.0;
  std::string path;
};

struct RunConfig {
  PotentialSpec potential;
  double k = 1.0;
  std::optional<int> m_max;
  std::optional<double> grid_step;
  std::optional<GridSpec> b_grid;
  std::optional<GridSpec> theta_grid;
  std::optional<int> kappa_max;
  std::optional<double> b_max;
  std::optional<std::vector<std::string>> methods;
  double range_epsilon = kDefaultRangeEpsilon;
  std::string output_stem;
};

namespace detail {

inline void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

inline double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing '" + key + "' in " + where);
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("'" + key + "' in " + where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("'" + key + "' in " + where + " must be finite");
  return x;
}

inline int integer(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing '" + key + "' in " + where);
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("'" + key + "' in " + where + " must be an integer");
  return v.get<int>();
}

inline GridSpec grid(const json& obj, const std::string& where) {
  check_keys(obj, where, {"min", "max", "count"});
  GridSpec g{number(obj, "min", where), number(obj, "max", where), integer(obj, "count", where)};
  if (g.count < 2) throw ConfigError(where + ".count must be at least 2");
  if (!(g.max > g.min)) throw ConfigError(where + " must be strictly increasing (max > min)");
  return g;
}

}  // namespace detail

/// Parses a run configuration; relative tabulated paths resolve against
/// base_dir. Any unrecognized key is an error.
inline RunConfig parse_config(const json& j, const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  check_keys(j, "config", {"potential", "k", "m_max", "grid_step", "b_grid", "theta_grid", "kappa_max", "b_max",
                           "methods", "tolerances", "output_stem"});
  RunConfig c;
  if (!j.contains("potential")) throw ConfigError("missing 'potential'");
  const auto& p = j.at("potential");
  if (!p.is_object() || !p.contains("type") || !p.at("type").is_string())
    throw ConfigError("potential.type must be one of gaussian, appendix_b, tabulated");
  c.potential.type = p.at("type").get<std::string>();
  if (c.potential.type == "gaussian") {
    check_keys(p, "potential", {"type", "U0", "a"});
    c.potential.U0 = number(p, "U0", "potential");
    c.potential.a = number(p, "a", "potential");
    if (!(c.potential.a > 0.0)) throw ConfigError("potential.a must be positive");
  } else if (c.potential.type == "appendix_b") {
    check_keys(p, "potential", {"type", "A", "R_c"});
    c.potential.A = number(p, "A", "potential");
    c.potential.R_c = number(p, "R_c", "potential");
    if (!(c.potential.R_c > 0.0)) throw ConfigError("potential.R_c must be positive");
  } else if (c.potential.type == "tabulated") {
    check_keys(p, "potential", {"type", "path"});
    if (!p.contains("path") || !p.at("path").is_string()) throw ConfigError("potential.path must be a string");
    std::filesystem::path path = p.at("path").get<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    c.potential.path = path.string();
  } else {
    throw ConfigError("unknown potential type '" + c.potential.type + "'");
  }

  c.k = number(j, "k", "config");
  if (!(c.k > 0.0)) throw ConfigError("k must be positive");
  if (j.contains("m_max")) {
    c.m_max = integer(j, "m_max", "config");
    if (*c.m_max < 0) throw ConfigError("m_max must be nonnegative");
  }
  if (j.contains("grid_step")) {
    c.grid_step = number(j, "grid_step", "config");
    if (!(*c.grid_step > 0.0)) throw ConfigError("grid_step must be positive");
  }
  if (j.contains("b_grid")) {
    c.b_grid = grid(j.at("b_grid"), "b_grid");
    if (c.b_grid->min < 0.0) throw ConfigError("b_grid.min must be nonnegative");
  }
  if (j.contains("theta_grid")) {
    c.theta_grid = grid(j.at("theta_grid"), "theta_grid");
    if (!(c.theta_grid->min > 0.0) || c.theta_grid->max > std::numbers::pi)
      throw ConfigError("theta_grid must lie in (0, pi]");
  }
  if (j.contains("kappa_max")) {
    c.kappa_max = integer(j, "kappa_max", "config");
    if (*c.kappa_max < 0) throw ConfigError("kappa_max must be nonnegative");
  }
  if (j.contains("b_max")) {
    c.b_max = number(j, "b_max", "config");
    if (!(*c.b_max > 0.0)) throw ConfigError("b_max must be positive");
  }
  if (j.contains("methods")) {
    if (!j.at("methods").is_array()) throw ConfigError("methods must be an array of strings");
    std::vector<std::string> m;
    for (const auto& v : j.at("methods")) {
      if (!v.is_string()) throw ConfigError("methods must be an array of strings");
      m.push_back(v.get<std::string>());
      if (!std::set<std::string>{"quantum", "wkb", "eikonal", "classical", "spa", "airy"}.count(m.back()))
        throw ConfigError("unknown method '" + m.back() + "'");
    }
    c.methods = m;
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    check_keys(t, "tolerances", {"range_epsilon"});
    if (t.contains("range_epsilon")) {
      c.range_epsilon = number(t, "range_epsilon", "tolerances");
      if (!(c.range_epsilon > 0.0)) throw ConfigError("tolerances.range_epsilon must be positive");
    }
  }
  if (j.contains("output_stem")) {
    if (!j.at("output_stem").is_string()) throw ConfigError("output_stem must be a string");
    c.output_stem = j.at("output_stem").get<std::string>();
    if (c.output_stem.empty() || c.output_stem.find('/') != std::string::npos)
      throw ConfigError("output_stem must be a plain file name");
  }
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
  }
  return parse_config(j, path.parent_path());
}

inline RadialPotential build_potential(const RunConfig& c) {
  const auto& p = c.potential;
  if (p.type == "gaussian") return make_gaussian(p.U0, p.a, c.range_epsilon);
  if (p.type == "appendix_b") return make_appendix_b({p.A, p.R_c});
  try {
    return load_tabulated_csv(p.path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

/// Fixed 12-significant-digit formatting; non-finite values become empty cells.
inline std::string format_number(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// JSON number rounded through the same 12-digit formatting (null if not finite).
inline json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(format_number(x));
}

struct CommandOutput {
  std::string stem;
  std::string csv;
  json summary;
  int failures = 0;       // cells lost to numerical errors
  int cells = 0;          // cells attempted
};

namespace detail {

inline constexpr double kGap = std::numeric_limits<double>::quiet_NaN();

inline bool wants(const RunConfig& c, const std::string& method) {
  if (!c.methods) return true;
  for (const auto& m : *c.methods)
    if (m == method) return true;
  return false;
}

// Records per-cell failures by error kind for the diagnostics block.
struct Diagnostics {
  std::map<std::string, std::map<std::string, int>> counts;
  std::map<std::string, std::string> first_message;
  int failures = 0;

  void add(const std::string& method, const Error& e) {
    ++failures;
    ++counts[method][to_string(e.kind())];
    first_message.emplace(method, e.what());
  }

  json to_json() const {
    json out = json::array();
    for (const auto& [method, kinds] : counts)
      for (const auto& [kind, n] : kinds)
        out.push_back({{"method", method}, {"error", kind}, {"count", n}, {"example", first_message.at(method)}});
    return out;
  }
};

inline double default_b_max(const RadialPotential& pot) {
  return pot.slow_decay() ? 20.0 * pot.tail_start() : 1.5 * pot.r_range();
}

inline std::vector<double> b_values(const RunConfig& c, const RadialPotential& pot) {
  if (c.b_grid) return c.b_grid->values();
  return numerics::linspace(0.0, default_b_max(pot), 401);
}

inline json potential_json(const RunConfig& c, const RadialPotential& pot) {
  json p = {{"type", c.potential.type}, {"label", pot.label()}, {"r_range", json_number(pot.r_range())}};
  if (pot.slow_decay()) p["truncation_estimate"] = json_number(pot.truncation_estimate());
  return p;
}

inline json rainbow_json(const RainbowInfo& r) {
  return {{"b_r", json_number(r.b_r)},       {"m_r", json_number(r.m_r)},
          {"theta_r", json_number(r.theta_r)}, {"theta_defl_r", json_number(r.theta_defl_r)},
          {"theta_dd", json_number(r.theta_dd)}};
}

}  // namespace detail

/// CSV m,delta_quantum,delta_wkb,delta_eikonal (Eikonal at b = m/k) and a
/// summary with the total cross section.
inline CommandOutput cmd_phase_shifts(const RunConfig& c) {
  const auto pot = build_potential(c);
  ScatteringSetup setup;
  try {
    setup = make_setup(pot, c.k, c.m_max, c.grid_step);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const int m_max = setup.m_max;
  const std::size_t n = static_cast<std::size_t>(m_max + 1);
  detail::Diagnostics diag;
  std::vector<double> q(n, detail::kGap), w(n, detail::kGap), e(n, detail::kGap);
  struct Cell {
    double value = detail::kGap;
    std::optional<Error> error;
  };
  auto sweep = [&](const std::string& method, std::vector<double>& out, auto&& fn) {
    if (!detail::wants(c, method)) return;
    const auto cells = numerics::parallel_map(n, [&](std::size_t m) {
      Cell cell;
      try {
        cell.value = fn(static_cast<int>(m));
      } catch (const Error& err) {
        cell.error = err;
      }
      return cell;
    });
    for (std::size_t m = 0; m < n; ++m) {
      out[m] = cells[m].value;
      if (cells[m].error) diag.add(method, *cells[m].error);
    }
  };
  sweep("quantum", q, [&](int m) { return radial_phase_shift(pot, setup, m); });
  sweep("wkb", w, [&](int m) { return wkb_phase_shift(pot, c.k, m); });
  sweep("eikonal", e, [&](int m) { return eikonal_phase(pot, c.k, m / c.k); });

  CommandOutput out;
  out.stem = c.output_stem.empty() ? "phase_shifts" : c.output_stem;
  std::ostringstream csv;
  csv << "m,delta_quantum,delta_wkb,delta_eikonal\n";
  for (std::size_t m = 0; m < n; ++m)
    csv << m << ',' << format_number(q[m]) << ',' << format_number(w[m]) << ',' << format_number(e[m]) << '\n';
  out.csv = csv.str();
  out.failures = diag.failures;
  out.cells = static_cast<int>(n) * (static_cast<int>(detail::wants(c, "quantum")) +
                                     static_cast<int>(detail::wants(c, "wkb")) +
                                     static_cast<int>(detail::wants(c, "eikonal")));

  json summary = {{"command", "phase-shifts"},
                  {"potential", detail::potential_json(c, pot)},
                  {"k", json_number(c.k)},
                  {"m_max", m_max},
                  {"grid_step", json_number(setup.grid_step)},
                  {"r_match", json_number(setup.r_match)}};
  auto sigma = [&](const std::vector<double>& d) -> json {
    PhaseShiftTable t{c.k, d, PhaseMethod::Quantum};
    for (double x : d)
      if (!std::isfinite(x)) return nullptr;
    return json_number(total_cross_section(t));
  };
  summary["sigma_total"] = {{"quantum", detail::wants(c, "quantum") ? sigma(q) : json(nullptr)},
                            {"wkb", detail::wants(c, "wkb") ? sigma(w) : json(nullptr)},
                            {"eikonal", detail::wants(c, "eikonal") ? sigma(e) : json(nullptr)}};
  summary["diagnostics"] = diag.to_json();
  out.summary = summary;
  return out;
}

/// CSV theta,dcs_quantum,dcs_classical,dcs_spa,dcs_airy with gaps where a
/// method does not apply (caustic proximity for SPA, outside the fold
/// window or no rainbow for Airy). The classical column is exactly 0 on the
/// dark side.
inline CommandOutput cmd_cross_section(const RunConfig& c) {
  if (!c.theta_grid) throw ConfigError("cross-section needs theta_grid");
  const auto pot = build_potential(c);
  const auto thetas = c.theta_grid->values();
  const std::size_t n = thetas.size();
  detail::Diagnostics diag;
  std::vector<double> q(n, detail::kGap), cl(n, detail::kGap), spa(n, detail::kGap), airy(n, detail::kGap);
  json summary = {{"command", "cross-section"}, {"potential", detail::potential_json(c, pot)}, {"k", json_number(c.k)}};

  if (detail::wants(c, "quantum")) {
    ScatteringSetup setup;
    try {
      setup = make_setup(pot, c.k, c.m_max, c.grid_step);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    try {
      const auto table = quantum_phase_shifts(pot, setup);
      q = differential_cross_section(table, thetas).values;
      summary["m_max"] = setup.m_max;
      summary["sigma_total_quantum"] = json_number(total_cross_section(table));
    } catch (const Error& e) {
      for (std::size_t i = 0; i < n; ++i) diag.add("quantum", e);
    }
  }

  const bool need_curve = detail::wants(c, "classical") || detail::wants(c, "spa") || detail::wants(c, "airy");
  if (need_curve) {
    const auto bs = detail::b_values(c, pot);
    const auto curve = deflection_curve(pot, c.k, bs);
    int kappa_max = 0;
    if (c.kappa_max) {
      kappa_max = *c.kappa_max;
    } else {
      try {
        kappa_max = default_kappa_max(detect_orbiting(pot, c.k, bs));
      } catch (const Error&) {
        kappa_max = 3;
      }
    }
    summary["kappa_max"] = kappa_max;
    if (detail::wants(c, "classical"))
      summary["sigma_total_classical"] = json_number(classical_total_2d(curve, c.b_max.value_or(bs.back())));

    std::optional<RainbowInfo> rainbow;
    if (detail::wants(c, "airy")) {
      try {
        rainbow = find_rainbow(pot, c.k, bs.front(), bs.back());
        summary["rainbow"] = detail::rainbow_json(*rainbow);
      } catch (const Error& e) {
        summary["rainbow"] = nullptr;
        if (e.kind() != ErrorKind::NoExtremum) diag.add("airy", e);
      }
    }

    struct Row {
      double classical = detail::kGap, spa = detail::kGap, airy = detail::kGap;
      std::vector<std::pair<std::string, Error>> errors;
    };
    const auto rows = numerics::parallel_map(n, [&](std::size_t i) {
      Row row;
      const double th = thetas[i];
      if (detail::wants(c, "classical")) {
        try {
          row.classical = classical_dcs_2d(curve, th).value;
        } catch (const Error& e) {
          row.errors.emplace_back("classical", e);
        }
      }
      if (detail::wants(c, "spa")) {
        try {
          const auto set = stationary_points(curve, th, kappa_max);
          row.spa = std::norm(spa_amplitude(set, pot, c.k)) / c.k;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::CausticProximity) row.errors.emplace_back("spa", e);
        }
      }
      if (rainbow) {
        const auto a = airy_amplitude_dcs(*rainbow, c.k, th);
        if (!a.outside_window) row.airy = a.value;
      }
      return row;
    });
    for (std::size_t i = 0; i < n; ++i) {
      cl[i] = rows[i].classical;
      spa[i] = rows[i].spa;
      airy[i] = rows[i].airy;
      for (const auto& [method, err] : rows[i].errors) diag.add(method, err);
    }
  }

  CommandOutput out;
  out.stem = c.output_stem.empty() ? "cross_section" : c.output_stem;
  std::ostringstream csv;
  csv << "theta,dcs_quantum,dcs_classical,dcs_spa,dcs_airy\n";
  for (std::size_t i = 0; i < n; ++i)
    csv << format_number(thetas[i]) << ',' << format_number(q[i]) << ',' << format_number(cl[i]) << ','
        << format_number(spa[i]) << ',' << format_number(airy[i]) << '\n';
  out.csv = csv.str();
  out.failures = diag.failures;
  out.cells = static_cast<int>(n) * 4;
  summary["diagnostics"] = diag.to_json();
  out.summary = summary;
  return out;
}

/// CSV b,theta_defl,r0 plus a rainbow/orbiting summary; for the Coulomb-core
/// model the summary also reports the rainbow threshold 3A/(2 R_c).
inline CommandOutput cmd_deflection(const RunConfig& c) {
  if (c.methods) throw ConfigError("deflection does not take 'methods'");
  const auto pot = build_potential(c);
  const auto bs = detail::b_values(c, pot);
  const auto curve = deflection_curve(pot, c.k, bs);
  detail::Diagnostics diag;
  for (std::size_t i = 0; i < bs.size(); ++i)
    if (!curve.valid(i)) {
      const ErrorKind kind = *curve.errors[i];
      // orbiting and plunging orbits are physical gaps, not failures
      if (kind != ErrorKind::OrbitingDegenerate && kind != ErrorKind::NoTurningPoint)
        diag.add("deflection", Error(kind, "b = " + format_number(bs[i])));
    }

  json summary = {{"command", "deflection"}, {"potential", detail::potential_json(c, pot)}, {"k", json_number(c.k)},
                  {"energy", json_number(c.k * c.k)}};
  try {
    const auto r = find_rainbow(pot, c.k, bs.front(), bs.back());
    summary["rainbow_exists"] = true;
    summary["rainbow"] = detail::rainbow_json(r);
  } catch (const Error& e) {
    summary["rainbow_exists"] = false;
    summary["rainbow"] = nullptr;
    if (e.kind() != ErrorKind::NoExtremum) diag.add("rainbow", e);
  }
  try {
    const auto o = detect_orbiting(pot, c.k, bs);
    json oj = {{"exists", o.exists}};
    if (o.exists) {
      oj["b0"] = json_number(o.b0);
      oj["r0"] = json_number(o.r0);
      oj["E_crit"] = json_number(o.E_crit);
      oj["log_coeff_above"] = json_number(o.log_coeff_above);
      oj["log_coeff_below"] = json_number(o.log_coeff_below);
    }
    summary["orbiting"] = oj;
  } catch (const Error& e) {
    summary["orbiting"] = nullptr;
    diag.add("orbiting", e);
  }
  if (c.potential.type == "appendix_b") {
    const double threshold = appendix_b_rainbow_threshold({c.potential.A, c.potential.R_c});
    summary["appendix_b"] = {{"rainbow_threshold_energy", json_number(threshold)},
                             {"energy_above_threshold", c.k * c.k > threshold}};
  }

  CommandOutput out;
  out.stem = c.output_stem.empty() ? "deflection" : c.output_stem;
  std::ostringstream csv;
  csv << "b,theta_defl,r0\n";
  for (std::size_t i = 0; i < bs.size(); ++i)
    csv << format_number(bs[i]) << ',' << format_number(curve.thetas_defl[i]) << ','
        << format_number(curve.turning_points[i]) << '\n';
  out.csv = csv.str();
  out.failures = diag.failures;
  out.cells = static_cast<int>(bs.size()) + 2;
  summary["diagnostics"] = diag.to_json();
  out.summary = summary;
  return out;
}

inline CommandOutput run_command(const std::string& command, const RunConfig& c) {
  if (command == "phase-shifts") return cmd_phase_shifts(c);
  if (command == "cross-section") return cmd_cross_section(c);
  if (command == "deflection") return cmd_deflection(c);
  throw ConfigError("unknown command '" + command + "'");
}

/// Writes <stem>.csv and <stem>.json into out_dir; returns the exit code the
/// run should report.
inline int write_outputs(const CommandOutput& out, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream f(out_dir / (out.stem + ".csv"), std::ios::binary);
    f << out.csv;
  }
  {
    std::ofstream f(out_dir / (out.stem + ".json"), std::ios::binary);
    f << out.summary.dump(2) << '\n';
  }
  if (out.failures == 0) return kOk;
  return out.failures >= out.cells ? kNumericalFailure : kPartialResults;
}

}  // namespace scatter2d::cli
