#pragma once

// Parameter sweeps over the spin models, CSV output and the figure presets.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qcorr/error.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/spin_models.hpp"

namespace qcorr {

enum class Model { Xxz, XxxDm };

enum class Measure { Concurrence, BellM, BellViolation, Mid, Gqd, Eq1 };

inline std::string_view to_string(Model model) { return model == Model::Xxz ? "xxz" : "xxx_dm"; }

inline Model parse_model(std::string_view name) {
  if (name == "xxz") return Model::Xxz;
  if (name == "xxx_dm") return Model::XxxDm;
  throw Error(ErrorKind::ConfigError, "unknown model '" + std::string(name) + "' (expected xxz or xxx_dm)");
}

inline std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::Concurrence: return "concurrence";
    case Measure::BellM: return "bell_m";
    case Measure::BellViolation: return "bell_violation";
    case Measure::Mid: return "mid";
    case Measure::Gqd: return "gqd";
    case Measure::Eq1: return "eq1";
  }
  return "?";
}

inline Measure parse_measure(std::string_view name) {
  for (auto m : {Measure::Concurrence, Measure::BellM, Measure::BellViolation, Measure::Mid, Measure::Gqd,
                 Measure::Eq1}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorKind::ConfigError, "unknown measure '" + std::string(name) + "'");
}

inline const std::vector<std::string>& model_parameters(Model model) {
  static const std::vector<std::string> xxz{"J", "Jz", "B", "b", "T"};
  static const std::vector<std::string> dm{"J", "D", "T"};
  return model == Model::Xxz ? xxz : dm;
}

struct Axis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
};

struct SweepConfig {
  Model model = Model::Xxz;
  std::map<std::string, double> fixed;
  std::map<std::string, std::string> ties;  // parameter -> parameter it copies
  std::vector<Axis> axes;
  std::vector<Measure> measures;
  std::string output;
};

struct SweepRow {
  std::vector<double> axis_values;
  std::vector<double> values;  // one per requested measure
  bool degenerate_marginal = false;
  std::optional<std::string> error;
};

inline constexpr double kGridSlack = 1e-9;

/// start + i * step for i = 0 .. floor((stop - start) / step), computed from
/// the index so no rounding accumulates.
inline std::vector<double> axis_points(const Axis& axis) {
  const auto count = static_cast<std::size_t>(std::floor((axis.stop - axis.start) / axis.step + kGridSlack)) + 1;
  std::vector<double> points(count);
  for (std::size_t i = 0; i < count; ++i) points[i] = axis.start + static_cast<double>(i) * axis.step;
  return points;
}

inline void validate_config(const SweepConfig& cfg) {
  const auto fail = [](const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); };
  const auto& names = model_parameters(cfg.model);
  const auto known = [&](const std::string& n) { return std::find(names.begin(), names.end(), n) != names.end(); };

  if (cfg.axes.empty() || cfg.axes.size() > 2) fail("a sweep needs one or two axes");
  if (cfg.measures.empty()) fail("no measures requested");

  std::map<std::string, int> seen;
  for (const auto& [name, value] : cfg.fixed) {
    if (!known(name)) fail("unknown parameter '" + name + "' for model " + std::string(to_string(cfg.model)));
    if (!std::isfinite(value)) fail("fixed parameter '" + name + "' is not finite");
    ++seen[name];
  }
  for (const auto& axis : cfg.axes) {
    if (!known(axis.name)) fail("unknown axis parameter '" + axis.name + "'");
    if (!(axis.step > 0.0) || !std::isfinite(axis.step)) fail("axis '" + axis.name + "' needs step > 0");
    if (!std::isfinite(axis.start) || !std::isfinite(axis.stop) || axis.stop < axis.start) {
      fail("axis '" + axis.name + "' needs finite start <= stop");
    }
    ++seen[axis.name];
  }
  for (const auto& [name, source] : cfg.ties) {
    if (!known(name) || !known(source)) fail("tie '" + name + "=" + source + "' names an unknown parameter");
    if (cfg.ties.count(source)) fail("tie source '" + source + "' is itself tied");
    ++seen[name];
  }
  for (const auto& name : names) {
    const int n = seen.count(name) ? seen[name] : 0;
    if (n == 0) fail("parameter '" + name + "' is neither fixed, swept nor tied");
    if (n > 1) fail("parameter '" + name + "' is specified more than once");
  }
}

inline ModelPoint make_point(Model model, const std::map<std::string, double>& values) {
  const auto at = [&](const char* name) { return values.at(name); };
  if (model == Model::Xxz) return XxzParams{at("J"), at("Jz"), at("B"), at("b"), at("T")};
  return XxxDmParams{at("J"), at("D"), at("T")};
}

/// Evaluates the requested measures on the closed-form thermal state.
inline SweepRow evaluate_point(const SweepConfig& cfg, const std::vector<double>& axis_values) {
  SweepRow row;
  row.axis_values = axis_values;
  row.values.assign(cfg.measures.size(), 0.0);

  std::map<std::string, double> values = cfg.fixed;
  for (std::size_t k = 0; k < cfg.axes.size(); ++k) values[cfg.axes[k].name] = axis_values[k];
  for (const auto& [name, source] : cfg.ties) values[name] = values.at(source);

  try {
    const auto point = make_point(cfg.model, values);
    const auto rho = thermal_state(point);

    const bool wants = [&] {
      for (auto m : cfg.measures)
        if (m != Measure::Eq1) return true;
      return false;
    }();
    std::optional<BlochDecomposition> bloch;
    if (wants) bloch = bloch_decompose(rho);

    for (std::size_t k = 0; k < cfg.measures.size(); ++k) {
      double v = 0.0;
      switch (cfg.measures[k]) {
        case Measure::Concurrence: v = concurrence(rho).concurrence; break;
        case Measure::BellM: v = bell_quantities(*bloch).m; break;
        case Measure::BellViolation: v = bell_quantities(*bloch).violation; break;
        case Measure::Gqd: v = gqd(*bloch).gqd; break;
        case Measure::Eq1: v = eq1_gqd_xxx(values.at("J"), values.at("T")); break;
        case Measure::Mid: {
          const auto q = mid(rho);
          v = q.mid;
          row.degenerate_marginal = q.degenerate_a || q.degenerate_b;
          break;
        }
      }
      if (!std::isfinite(v)) throw Error(ErrorKind::NumericalFailure, "non-finite measure value");
      row.values[k] = v;
    }
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

/// One row per grid point, first axis outermost. `workers` only changes how
/// the points are scheduled, never the output.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg, unsigned workers = 1) {
  validate_config(cfg);

  std::vector<std::vector<double>> grid;
  const auto first = axis_points(cfg.axes[0]);
  if (cfg.axes.size() == 1) {
    for (double a : first) grid.push_back({a});
  } else {
    const auto second = axis_points(cfg.axes[1]);
    for (double a : first)
      for (double b : second) grid.push_back({a, b});
  }

  std::vector<SweepRow> rows(grid.size());
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(grid.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) rows[i] = evaluate_point(cfg, grid[i]);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < grid.size(); i = next++) rows[i] = evaluate_point(cfg, grid[i]);
    });
  }
  pool.clear();
  return rows;
}

inline bool has_errors(const std::vector<SweepRow>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.error.has_value(); });
}

inline bool reports_degeneracy(const SweepConfig& cfg) {
  return std::find(cfg.measures.begin(), cfg.measures.end(), Measure::Mid) != cfg.measures.end();
}

/// Axis names, then measure names, then `mid_degenerate` when MID is requested.
inline std::vector<std::string> csv_header(const SweepConfig& cfg) {
  std::vector<std::string> header;
  for (const auto& axis : cfg.axes) header.push_back(axis.name);
  for (auto m : cfg.measures) header.emplace_back(to_string(m));
  if (reports_degeneracy(cfg)) header.emplace_back("mid_degenerate");
  return header;
}

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& header) {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) out += ',';
    out += header[k];
  }
  out += '\n';
  for (const auto& row : rows) {
    const std::size_t extra = header.size() - row.axis_values.size() - row.values.size();
    for (std::size_t k = 0; k < row.axis_values.size(); ++k) {
      if (k) out += ',';
      out += format_real(row.axis_values[k]);
    }
    for (double v : row.values) {
      out += ',';
      out += row.error ? "error" : format_real(v);
    }
    if (extra == 1) {
      out += ',';
      out += row.error ? "error" : (row.degenerate_marginal ? "1" : "0");
    }
    out += '\n';
  }
  return out;
}

inline void write_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& header,
                      const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  const auto text = format_csv(rows, header);
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
}

struct PresetRun {
  std::string name;  // file stem, e.g. "fig2_jz-0.5"
  SweepConfig config;
};

inline constexpr double kPresetStep = 0.05;
inline constexpr double kPresetTemperature = 0.2;

/// Sweeps behind the figures. Axis ranges are not given with the figures;
/// fields span [-3, 3] and couplings [-2, 2] at step 0.05. The fig5 zoom
/// window is D in [-0.5, 0.5], J in [0, 1] at step 0.01.
inline std::vector<PresetRun> repro_preset(std::string_view id) {
  const std::vector<Measure> all{Measure::Concurrence, Measure::BellM, Measure::BellViolation, Measure::Mid,
                                 Measure::Gqd};
  std::vector<PresetRun> runs;

  if (id == "fig1") {
    SweepConfig cfg;
    cfg.model = Model::Xxz;
    cfg.fixed = {{"B", 0.0}, {"b", 0.0}, {"T", kPresetTemperature}};
    cfg.ties = {{"Jz", "J"}};
    cfg.axes = {{"J", -2.0, 2.0, kPresetStep}};
    cfg.measures = all;
    runs.push_back({"fig1", cfg});
  } else if (id == "fig2" || id == "fig3") {
    const bool field_axis = id == "fig3";
    for (double jz : {-0.5, 0.5}) {
      SweepConfig cfg;
      cfg.model = Model::Xxz;
      cfg.fixed = {{"J", 1.0}, {"Jz", jz}, {"T", kPresetTemperature}};
      if (field_axis) {
        cfg.fixed["b"] = 0.6;
        cfg.axes = {{"B", -3.0, 3.0, kPresetStep}};
      } else {
        cfg.fixed["B"] = 0.6;
        cfg.axes = {{"b", -3.0, 3.0, kPresetStep}};
      }
      cfg.measures = all;
      runs.push_back({std::string(id) + "_jz" + format_real(jz), cfg});
    }
  } else if (id == "fig4" || id == "fig5") {
    SweepConfig cfg;
    cfg.model = Model::XxxDm;
    cfg.fixed = {{"T", kPresetTemperature}};
    if (id == "fig4") {
      cfg.axes = {{"D", -2.0, 2.0, kPresetStep}, {"J", -2.0, 2.0, kPresetStep}};
    } else {
      cfg.axes = {{"D", -0.5, 0.5, 0.01}, {"J", 0.0, 1.0, 0.01}};
    }
    cfg.measures = {Measure::BellViolation, Measure::Gqd};
    runs.push_back({std::string(id), cfg});
  } else {
    throw Error(ErrorKind::UnknownPreset, "unknown preset '" + std::string(id) + "' (fig1..fig5)");
  }
  return runs;
}

/// Grid used to check closed-form states against the Gibbs oracle:
/// (J, Jz, B, b) in {-2, -1, 0, 1, 2}^4 and (J, D) in {-2, ..., 2}^2, each at
/// T in {0.1, 0.5, 2}.
inline std::vector<ModelPoint> oracle_grid() {
  const double values[] = {-2.0, -1.0, 0.0, 1.0, 2.0};
  const double temperatures[] = {0.1, 0.5, 2.0};
  std::vector<ModelPoint> points;
  for (double T : temperatures) {
    for (double J : values)
      for (double Jz : values)
        for (double B : values)
          for (double b : values) points.emplace_back(XxzParams{J, Jz, B, b, T});
    for (double J : values)
      for (double D : values) points.emplace_back(XxxDmParams{J, D, T});
  }
  return points;
}

}  // namespace qcorr
