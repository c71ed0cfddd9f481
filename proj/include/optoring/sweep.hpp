#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "optoring/ring_model.hpp"

namespace optoring::sweep {

/// Usage or configuration problem; maps to exit status 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Param {
  Theta,
  OmegaL,
  OmegaM1,
  OmegaM2,
  GammaM1,
  GammaM2,
  G1,
  G2,
  Kappa,
  Lambda,
  Power,
  Temp1,
  Temp2,
  Detuning,
};

/// One source of parameter settings (a config file, or the command line).
/// Each parameter may be spelled at most once per layer, e.g. "kappa_rad_s"
/// and "kappa_over_2pi_Hz" are mutually exclusive.
class ConfigLayer {
 public:
  struct Setting {
    std::string key;
    double value;
  };

  /// Throws ConfigError for unknown keys and conflicting spellings.
  void set(const std::string& key, double value);
  /// Like set(), but replaces any earlier spelling of the same parameter.
  void override_with(const std::string& key, double value);
  /// Parses "key=value".
  void set_assignment(std::string_view assignment);

  const std::map<Param, Setting>& settings() const { return settings_; }

 private:
  std::map<Param, Setting> settings_;
};

/// Parses a JSON object of named parameters. Unknown keys are rejected.
ConfigLayer parse_config_json(std::string_view text);
ConfigLayer load_config_file(const std::string& path);

/// All accepted configuration keys.
std::vector<std::string> known_keys();

/// Applies layers in order onto the experimental defaults and validates.
/// Later layers win per parameter.
ring_model::PhysicalParams resolve_params(const std::vector<ConfigLayer>& layers);

struct Family {
  std::string key;
  std::vector<double> values;
};

struct SweepSpec {
  std::string axis;  // delta_over_omega, temperature_K, lambda_over_omega or power_W
  double start = 0.0;
  double stop = 1.0;
  std::size_t points = 2;
  std::optional<Family> family;
  std::vector<ConfigLayer> base;

  /// Throws ConfigError on an invalid axis, grid or family.
  void validate() const;
};

std::vector<std::string_view> sweep_axes();

/// Inclusive linear grid.
std::vector<double> linear_grid(double start, double stop, std::size_t points);

struct SweepRow {
  double axis_value;
  std::optional<double> family_value;
  double delta_over_omega;
  double T_K;
  double lambda_rad_s;
  double power_W;
  double stability_margin;  // not written to CSV
  std::optional<ring_model::EntanglementMeasures> measures;  // empty when unstable
};

struct SweepPoint {
  double axis_value;
  std::optional<double> family_value;
  ring_model::PhysicalParams params;
};

/// Resolved parameters of every grid point, in row order.
std::vector<SweepPoint> sweep_points(const SweepSpec& spec);

/// CSV column names, in order.
const std::vector<std::string>& csv_columns();

/// Rows ordered by (family value, axis value), ascending. Results do not
/// depend on `jobs`.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, std::size_t jobs = 1);

/// Comment lines (without '#') recording every fixed parameter of a sweep.
std::vector<std::string> describe_sweep(const SweepSpec& spec);

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, const std::vector<std::string>& comments);

/// Parsed CSV: header plus cells, with empty cells as nullopt.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;
};

CsvTable read_csv(std::istream& is);

struct FigurePreset {
  std::string name;
  std::string title;
  SweepSpec spec;
};

const std::vector<FigurePreset>& figure_presets();
/// Throws ConfigError listing valid names.
const FigurePreset& figure_preset(std::string_view name);

/// Formats with 12 significant digits.
std::string format_number(double v);

/// Key-value report of derived parameters, stability and all measures.
void write_point_report(std::ostream& os, const ring_model::PhysicalParams& p,
                        const ring_model::EntanglementReport& report);

}  // namespace optoring::sweep
