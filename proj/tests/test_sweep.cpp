#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcorr/sweep.hpp"

using namespace qcorr;
using Catch::Matchers::WithinAbs;

namespace {

SweepConfig fig2_like(double jz) {
  SweepConfig cfg;
  cfg.model = Model::Xxz;
  cfg.fixed = {{"J", 1.0}, {"Jz", jz}, {"B", 0.6}, {"T", 0.2}};
  cfg.axes = {{"b", -3.0, 3.0, 0.05}};
  cfg.measures = {Measure::Concurrence, Measure::BellM, Measure::Mid, Measure::Gqd};
  return cfg;
}

ErrorKind config_error(const SweepConfig& cfg) {
  try {
    validate_config(cfg);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("config unexpectedly valid");
  return ErrorKind::DomainError;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("axis points are index based", "[sweep]") {
  CHECK(axis_points({"J", 0.5, 0.5, 0.1}).size() == 1);
  const auto pts = axis_points({"J", -2.0, 2.0, 0.05});
  REQUIRE(pts.size() == 81);
  CHECK(pts.front() == -2.0);
  CHECK_THAT(pts.back(), WithinAbs(2.0, 1e-15));
  CHECK(pts[10] == -2.0 + 10 * 0.05);
  CHECK(axis_points({"D", -2.0, 2.0, 0.1}).size() == 41);
}

TEST_CASE("config validation", "[sweep]") {
  CHECK_NOTHROW(validate_config(fig2_like(0.5)));

  auto missing = fig2_like(0.5);
  missing.fixed.erase("T");
  CHECK(config_error(missing) == ErrorKind::ConfigError);

  auto twice = fig2_like(0.5);
  twice.fixed["b"] = 0.1;
  CHECK(config_error(twice) == ErrorKind::ConfigError);

  auto unknown = fig2_like(0.5);
  unknown.fixed["D"] = 0.1;
  CHECK(config_error(unknown) == ErrorKind::ConfigError);

  auto bad_step = fig2_like(0.5);
  bad_step.axes[0].step = 0.0;
  CHECK(config_error(bad_step) == ErrorKind::ConfigError);

  auto reversed = fig2_like(0.5);
  reversed.axes[0] = {"b", 1.0, -1.0, 0.1};
  CHECK(config_error(reversed) == ErrorKind::ConfigError);

  auto no_measures = fig2_like(0.5);
  no_measures.measures.clear();
  CHECK(config_error(no_measures) == ErrorKind::ConfigError);

  CHECK_THROWS_AS(parse_measure("entropy"), Error);
  CHECK_THROWS_AS(parse_model("xyz"), Error);
}

TEST_CASE("run_sweep shapes", "[sweep]") {
  auto single = fig2_like(0.5);
  single.axes = {{"b", 0.3, 0.3, 0.05}};
  CHECK(run_sweep(single).size() == 1);

  SweepConfig grid;
  grid.model = Model::XxxDm;
  grid.fixed = {{"T", 0.2}};
  grid.axes = {{"D", -2.0, 2.0, 0.1}, {"J", -2.0, 2.0, 0.1}};
  grid.measures = {Measure::BellViolation, Measure::Gqd};
  const auto rows = run_sweep(grid, 3);
  REQUIRE(rows.size() == 1681);
  CHECK(rows[0].axis_values == std::vector<double>{-2.0, -2.0});
  CHECK(rows[1].axis_values[0] == -2.0);
  CHECK(rows[41].axis_values[0] == -2.0 + 0.1);
  CHECK(std::is_sorted(rows.begin(), rows.end(),
                       [](const SweepRow& a, const SweepRow& b) { return a.axis_values < b.axis_values; }));
  CHECK_FALSE(has_errors(rows));
}

TEST_CASE("fig1 preset rows agree with full_report", "[sweep]") {
  const auto runs = repro_preset("fig1");
  REQUIRE(runs.size() == 1);
  const auto& cfg = runs[0].config;
  CHECK(cfg.model == Model::Xxz);
  CHECK(cfg.ties.at("Jz") == "J");
  CHECK(cfg.fixed.at("T") == 0.2);

  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 81);
  for (std::size_t i : {5u, 40u, 44u, 70u}) {
    const double J = rows[i].axis_values[0];
    const auto report = full_report(xxz_thermal_analytic({J, J, 0.0, 0.0, 0.2}).first);
    CHECK(rows[i].values[0] == report.conc.concurrence);
    CHECK(rows[i].values[1] == report.bell.m);
    CHECK(rows[i].values[2] == report.bell.violation);
    CHECK(rows[i].values[3] == report.mid.mid);
    CHECK(rows[i].values[4] == report.gqd.gqd);
    CHECK(rows[i].degenerate_marginal);
  }
}

TEST_CASE("presets", "[sweep]") {
  const auto fig2 = repro_preset("fig2");
  REQUIRE(fig2.size() == 2);
  CHECK(fig2[0].name == "fig2_jz-0.5");
  CHECK(fig2[1].name == "fig2_jz0.5");
  for (const auto& run : fig2) {
    CHECK(run.config.fixed.at("B") == 0.6);
    CHECK(run.config.fixed.at("J") == 1.0);
    CHECK(run.config.fixed.at("T") == 0.2);
    CHECK(run.config.axes[0].name == "b");
    CHECK_NOTHROW(validate_config(run.config));
  }

  const auto fig3 = repro_preset("fig3");
  CHECK(fig3[0].config.fixed.at("b") == 0.6);
  CHECK(fig3[0].config.axes[0].name == "B");

  const auto fig4 = repro_preset("fig4");
  REQUIRE(fig4.size() == 1);
  CHECK(fig4[0].config.model == Model::XxxDm);
  CHECK(fig4[0].config.axes.size() == 2);
  CHECK(fig4[0].config.fixed.at("T") == 0.2);
  CHECK(fig4[0].config.measures == std::vector<Measure>{Measure::BellViolation, Measure::Gqd});

  const auto fig5 = repro_preset("fig5");
  CHECK(fig5[0].config.axes[0].step < fig4[0].config.axes[0].step);
  CHECK_NOTHROW(validate_config(fig5[0].config));

  try {
    repro_preset("fig6");
    FAIL("expected UnknownPreset");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownPreset);
  }
}

TEST_CASE("grid point errors become error cells", "[sweep]") {
  SweepConfig cfg;
  cfg.model = Model::Xxz;
  cfg.fixed = {{"B", 0.0}, {"b", 0.0}, {"T", 0.2}};
  cfg.ties = {{"Jz", "J"}};
  cfg.axes = {{"J", -0.1, 0.1, 0.1}};
  cfg.measures = {Measure::Gqd, Measure::Eq1};
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 3);
  CHECK_FALSE(rows[0].error);
  CHECK(rows[1].error);  // J = 0 has no closed-form discord
  CHECK(has_errors(rows));

  const auto text = format_csv(rows, csv_header(cfg));
  CHECK(text.find("0,error,error\n") != std::string::npos);
  CHECK_THAT(rows[2].values[0], WithinAbs(rows[2].values[1], 1e-10));
}

TEST_CASE("CSV formatting", "[sweep]") {
  const std::vector<std::string> header{"b", "concurrence", "gqd"};
  CHECK(format_csv({}, header) == "b,concurrence,gqd\n");

  SweepRow row;
  row.axis_values = {0.1};
  row.values = {1.0 / 3.0, 2.5e-13};
  CHECK(format_csv({row}, header) == "b,concurrence,gqd\n0.1,0.333333333333,2.5e-13\n");

  auto cfg = fig2_like(0.5);
  CHECK(csv_header(cfg) == std::vector<std::string>{"b", "concurrence", "bell_m", "mid", "gqd", "mid_degenerate"});
}

TEST_CASE("write_csv is byte-deterministic across worker counts", "[sweep]") {
  const auto dir = std::filesystem::temp_directory_path() / "qcorr_test_sweep";
  std::filesystem::create_directories(dir);
  auto cfg = fig2_like(-0.5);
  write_csv(run_sweep(cfg, 1), csv_header(cfg), (dir / "a.csv").string());
  write_csv(run_sweep(cfg, 1), csv_header(cfg), (dir / "b.csv").string());
  write_csv(run_sweep(cfg, 4), csv_header(cfg), (dir / "c.csv").string());
  const auto a = slurp(dir / "a.csv");
  CHECK(a.size() > 1000);
  CHECK(a == slurp(dir / "b.csv"));
  CHECK(a == slurp(dir / "c.csv"));

  CHECK_THROWS_AS(write_csv({}, {"x"}, (dir / "missing" / "x.csv").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("oracle grid covers both models", "[sweep]") {
  const auto grid = oracle_grid();
  CHECK(grid.size() == 3 * (625 + 25));
}
