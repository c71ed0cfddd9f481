#include <doctest.h>

#include <cmath>
#include <sstream>

#include "optoring/sweep.hpp"

using namespace optoring::sweep;
using optoring::ring_model::CavityDetuning;
using optoring::ring_model::EffectiveDetuning;
using doctest::Approx;

namespace {

std::string to_csv(const SweepSpec& spec, std::size_t jobs) {
  std::ostringstream os;
  write_csv(os, run_sweep(spec, jobs), describe_sweep(spec));
  return os.str();
}

SweepSpec small_delta_sweep() {
  SweepSpec spec;
  spec.axis = "delta_over_omega";
  spec.start = -1.0;
  spec.stop = 2.0;
  spec.points = 31;
  spec.family = Family{"power_W", {0.09, 0.03}};
  return spec;
}

}  // namespace

TEST_CASE("config keys, units and exclusivity") {
  const auto layer = parse_config_json(R"({"kappa_over_2pi_Hz": 5e6, "power_W": 0.03, "temperature_K": 0.002})");
  const auto p = resolve_params({layer});
  CHECK(p.kappa == Approx(2.0 * optoring::ring_model::kPi * 5e6));
  CHECK(p.power == 0.03);
  CHECK(p.temp1 == 0.002);
  CHECK(p.temp2 == 0.002);

  CHECK_THROWS_AS(parse_config_json(R"({"kappa_rad_s": 1, "kappa_over_2pi_Hz": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"temperature_K": 1, "temp1_K": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"delta_rad_s": 1, "delta_c_rad_s": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"kapa_rad_s": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"power_W": "high"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"([1, 2])"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"power_W": )"), ConfigError);
}

TEST_CASE("later layers override per parameter") {
  ConfigLayer file = parse_config_json(R"({"lambda_rad_s": 1000.0, "omega_m1_over_2pi_Hz": 2e7})");
  ConfigLayer cli;
  cli.set_assignment("lambda_over_omega=0.2");
  const auto p = resolve_params({file, cli});
  CHECK(p.omega_m1 == Approx(2.0 * optoring::ring_model::kPi * 2e7));
  CHECK(p.lambda == Approx(0.2 * p.omega_m1));
  CHECK(resolve_params({file}).lambda == 1000.0);

  ConfigLayer cavity;
  cavity.set_assignment("delta_c_over_omega=1.1");
  const auto pc = resolve_params({cavity});
  REQUIRE(std::holds_alternative<CavityDetuning>(pc.detuning));
  CHECK(std::get<CavityDetuning>(pc.detuning).delta_c == Approx(1.1 * pc.omega_m1));

  CHECK_THROWS_AS(cli.set_assignment("lambda_over_omega"), ConfigError);
  CHECK_THROWS_AS(cli.set_assignment("power_W=abc"), ConfigError);
  cli.override_with("lambda_rad_s", 5.0);
  CHECK(resolve_params({cli}).lambda == 5.0);
}

TEST_CASE("invalid resolved parameters name the field") {
  ConfigLayer layer;
  layer.set("kappa_rad_s", -1.0);
  try {
    resolve_params({layer});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("kappa") != std::string::npos);
  }
}

TEST_CASE("linear grid is inclusive") {
  const auto g = linear_grid(0.1, 2.0, 191);
  REQUIRE(g.size() == 191);
  CHECK(g.front() == 0.1);
  CHECK(g.back() == 2.0);
  CHECK(g[90] == Approx(1.0));
}

TEST_CASE("sweep spec validation") {
  SweepSpec spec = small_delta_sweep();
  CHECK_NOTHROW(spec.validate());
  spec.axis = "kappa_rad_s";
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = small_delta_sweep();
  spec.stop = spec.start;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = small_delta_sweep();
  spec.points = 1;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.points = 100001;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = small_delta_sweep();
  spec.family->values.clear();
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = small_delta_sweep();
  spec.family->key = "delta_over_omega";
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("row count and ordering") {
  SweepSpec two;
  two.axis = "power_W";
  two.start = 0.0;
  two.stop = 0.09;
  two.points = 2;
  CHECK(run_sweep(two).size() == 2);

  SweepSpec spec = small_delta_sweep();
  spec.start = 0.1;
  spec.stop = 2.0;
  spec.points = 191;
  spec.family = Family{"lambda_over_omega", {0.15, 0.05, 0.10}};
  const auto rows = run_sweep(spec, 4);
  REQUIRE(rows.size() == 573);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool same_family = *rows[i].family_value == *rows[i - 1].family_value;
    CHECK((same_family ? rows[i].axis_value > rows[i - 1].axis_value
                       : *rows[i].family_value > *rows[i - 1].family_value));
  }
  CHECK(*rows.front().family_value == 0.05);
  CHECK(rows.front().lambda_rad_s == Approx(0.05 * 2.0 * optoring::ring_model::kPi * 1e7));
}

TEST_CASE("CSV schema, empty unstable cells, round trip") {
  const SweepSpec spec = small_delta_sweep();
  const auto rows = run_sweep(spec);
  std::ostringstream os;
  write_csv(os, rows, describe_sweep(spec));
  std::istringstream is(os.str());
  const auto table = read_csv(is);
  CHECK(table.header == csv_columns());
  CHECK(!table.comments.empty());
  REQUIRE(table.rows.size() == rows.size());

  std::size_t unstable = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& cells = table.rows[i];
    CHECK(*cells[0] == Approx(rows[i].axis_value).epsilon(1e-11));
    if (rows[i].measures) {
      CHECK(*cells[6] == 1.0);
      CHECK(*cells[8] == Approx(rows[i].measures->E_CM1).epsilon(1e-11));
      CHECK(*cells[16] == Approx(rows[i].measures->R_min).epsilon(1e-11));
    } else {
      ++unstable;
      CHECK(*cells[6] == 0.0);
      for (std::size_t c = 7; c < cells.size(); ++c) CHECK_FALSE(cells[c].has_value());
    }
  }
  // Blue-detuned points at 90 mW are unstable.
  CHECK(unstable > 0);
  CHECK(os.str().find("\r") == std::string::npos);
}

TEST_CASE("output is deterministic and independent of the worker count") {
  const SweepSpec spec = small_delta_sweep();
  const auto a = to_csv(spec, 1);
  CHECK(a == to_csv(spec, 1));
  CHECK(a == to_csv(spec, 3));
  CHECK(a == to_csv(spec, 8));
}

TEST_CASE("figure presets") {
  CHECK(figure_presets().size() == 10);
  CHECK_THROWS_AS(figure_preset("fig6a"), ConfigError);
  for (const auto& preset : figure_presets()) CHECK_NOTHROW(preset.spec.validate());

  const auto& fig2a = figure_preset("fig2a");
  REQUIRE(fig2a.spec.family);
  CHECK(fig2a.spec.family->key == "power_W");
  CHECK(fig2a.spec.family->values == std::vector<double>{0.030, 0.060, 0.090});

  const auto& fig1a = figure_preset("fig1a");
  CHECK(fig1a.spec.axis == "delta_over_omega");
  CHECK(fig1a.spec.start <= 0.0);
  CHECK(fig1a.spec.stop >= 2.0);
  CHECK(fig1a.spec.family->key == "lambda_over_omega");
  const auto base = resolve_params(fig1a.spec.base);
  CHECK(base.power == 0.06);
  CHECK(base.temp1 == 1e-3);

  const auto fig4b = resolve_params(figure_preset("fig4b").spec.base);
  CHECK(std::get<EffectiveDetuning>(fig4b.detuning).delta == Approx(0.5 * fig4b.omega_m1));
  const auto fig2b = resolve_params(figure_preset("fig2b").spec.base);
  CHECK(std::get<EffectiveDetuning>(fig2b.detuning).delta == Approx(0.8 * fig2b.omega_m1));
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(62831853.07179586) == "62831853.0718");
}
