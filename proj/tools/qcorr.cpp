// qcorr: correlation measures for two-qubit states and spin-model sweeps.
//
//   qcorr report --state rho.txt
//   qcorr sweep --model xxz --fix Jz=0.5 --fix B=0.6 --fix J=1 --fix T=0.2
//               --axis b:-3:3:0.05 --measures concurrence,mid,gqd --out out.csv
//   qcorr repro fig2 --out data/
//   qcorr validate
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qcorr/qcorr.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

const char* kBasisHelp =
    "State file: 4 lines x 4 whitespace-separated complex entries (a, a+bi, a-bi, bi).\n"
    "Basis order |1,1>, |1,0>, |0,1>, |0,0>, where |1> is the sigma_z = +1 state.\n"
    "Lines starting with '#' are ignored.";

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw qcorr::Error(qcorr::ErrorKind::ConfigError, "cannot parse " + what + " '" + text + "'");
  }
}

qcorr::Axis parse_axis(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 4) {
    throw qcorr::Error(qcorr::ErrorKind::ConfigError, "axis '" + spec + "' must be name:start:stop:step");
  }
  return {parts[0], parse_number(parts[1], "axis start"), parse_number(parts[2], "axis stop"),
          parse_number(parts[3], "axis step")};
}

std::pair<std::string, std::string> parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw qcorr::Error(qcorr::ErrorKind::ConfigError, "expected name=value, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

int emit(const qcorr::SweepConfig& cfg, unsigned jobs) {
  const auto rows = qcorr::run_sweep(cfg, jobs);
  qcorr::write_csv(rows, qcorr::csv_header(cfg), cfg.output);
  int failures = 0;
  for (const auto& row : rows) {
    if (!row.error) continue;
    ++failures;
    std::cerr << "grid point (";
    for (std::size_t k = 0; k < row.axis_values.size(); ++k) {
      std::cerr << (k ? ", " : "") << cfg.axes[k].name << "=" << qcorr::format_real(row.axis_values[k]);
    }
    std::cerr << "): " << *row.error << "\n";
  }
  std::cerr << cfg.output << ": " << rows.size() << " rows";
  if (failures) std::cerr << ", " << failures << " with errors";
  std::cerr << "\n";
  return failures ? kExitNumerical : kExitOk;
}

int run_report(const std::string& path) {
  const auto rho = qcorr::validate_state(qcorr::read_state_file(path));
  const auto report = qcorr::full_report(rho);
  std::cout << qcorr::to_json(report).dump(2) << "\n";
  return kExitOk;
}

int run_validate(bool verbose) {
  const auto points = qcorr::oracle_grid();
  double worst = 0.0;
  int failures = 0;
  for (const auto& point : points) {
    const auto cv = qcorr::cross_validate(point);
    worst = std::max(worst, cv.trace_distance);
    if (!cv.pass) ++failures;
    if (verbose || !cv.pass) {
      std::visit(
          [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, qcorr::XxzParams>) {
              std::printf("xxz J=%g Jz=%g B=%g b=%g T=%g", p.J, p.Jz, p.B, p.b, p.T);
            } else {
              std::printf("xxx_dm J=%g D=%g T=%g", p.J, p.D, p.T);
            }
          },
          point);
      std::printf("  trace_distance=%.3e  %s\n", cv.trace_distance, cv.pass ? "PASS" : "FAIL");
    }
  }
  std::printf("%zu points, max trace distance %.3e, %d failures (tolerance %.0e)\n", points.size(), worst, failures,
              qcorr::kCrossValidationTol);
  std::printf("closed-form XXX discord uses coth: 1 / (2 (1 - 2 coth(J/T))^2)\n");
  return failures ? kExitNumerical : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit correlation measures and spin-model sweeps"};
  app.require_subcommand(1);

  std::string state_path;
  auto* report = app.add_subcommand("report", "Print all measures of one state as JSON");
  report->add_option("--state", state_path, "State file")->required()->check(CLI::ExistingFile);
  report->footer(kBasisHelp);

  std::string model = "xxz";
  std::vector<std::string> fixes;
  std::vector<std::string> ties;
  std::vector<std::string> axes;
  std::string measures = "concurrence,bell_m,bell_violation,mid,gqd";
  std::string out_path = "sweep.csv";
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Evaluate measures over a parameter grid");
  sweep->add_option("--model", model, "xxz or xxx_dm")->capture_default_str();
  sweep->add_option("--fix", fixes, "Fixed parameter name=value (repeatable)");
  sweep->add_option("--tie", ties, "Tie parameter to another, e.g. Jz=J (repeatable)");
  sweep->add_option("--axis", axes, "Axis name:start:stop:step (one or two)")->required();
  sweep->add_option("--measures", measures, "Comma-separated subset of concurrence,bell_m,bell_violation,mid,gqd,eq1")
      ->capture_default_str();
  sweep->add_option("--out", out_path, "Output CSV")->capture_default_str();
  sweep->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->footer("Parameters: xxz {J, Jz, B, b, T}; xxx_dm {J, D, T}.");

  std::string preset;
  std::string out_dir = ".";
  double step_override = 0.0;
  unsigned repro_jobs = 1;
  auto* repro = app.add_subcommand("repro", "Write the sweep data behind a figure (fig1..fig5)");
  repro->add_option("preset", preset, "fig1, fig2, fig3, fig4 or fig5")->required();
  repro->add_option("--out", out_dir, "Output directory")->capture_default_str();
  repro->add_option("--step", step_override, "Override the step of every axis");
  repro->add_option("--jobs", repro_jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  bool verbose = false;
  auto* validate = app.add_subcommand("validate", "Compare closed-form thermal states with the Gibbs oracle");
  validate->add_flag("-v,--verbose", verbose, "Print every grid point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*report) return run_report(state_path);
    if (*validate) return run_validate(verbose);

    if (*sweep) {
      qcorr::SweepConfig cfg;
      cfg.model = qcorr::parse_model(model);
      for (const auto& f : fixes) {
        const auto [name, value] = parse_assignment(f);
        if (cfg.fixed.count(name)) {
          throw qcorr::Error(qcorr::ErrorKind::ConfigError, "parameter '" + name + "' fixed twice");
        }
        cfg.fixed[name] = parse_number(value, "value of " + name);
      }
      for (const auto& t : ties) {
        const auto [name, source] = parse_assignment(t);
        cfg.ties[name] = source;
      }
      for (const auto& a : axes) cfg.axes.push_back(parse_axis(a));
      for (const auto& m : split(measures, ',')) cfg.measures.push_back(qcorr::parse_measure(m));
      cfg.output = out_path;
      return emit(cfg, jobs);
    }

    if (*repro) {
      auto runs = qcorr::repro_preset(preset);
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      if (ec) throw qcorr::Error(qcorr::ErrorKind::IoError, "cannot create '" + out_dir + "': " + ec.message());
      int code = kExitOk;
      for (auto& run : runs) {
        if (step_override > 0.0) {
          for (auto& axis : run.config.axes) axis.step = step_override;
        }
        run.config.output = (std::filesystem::path(out_dir) / (run.name + ".csv")).string();
        code = std::max(code, emit(run.config, repro_jobs));
      }
      return code;
    }
  } catch (const qcorr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_config_error() ? kExitConfig : kExitNumerical;
  }
  return kExitOk;
}
