#include "optoring/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace optoring::sweep {

namespace {

using ring_model::PhysicalParams;

enum class Unit { Si, RadPerSecond, Over2piHz, OverOmegaM };

struct KeyDef {
  std::string_view key;
  std::vector<Param> targets;
  Unit unit;
  bool cavity_detuning = false;
};

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = {
      {"theta_rad", {Param::Theta}, Unit::Si},
      {"omega_L_rad_s", {Param::OmegaL}, Unit::RadPerSecond},
      {"omega_L_over_2pi_Hz", {Param::OmegaL}, Unit::Over2piHz},
      {"omega_m1_rad_s", {Param::OmegaM1}, Unit::RadPerSecond},
      {"omega_m1_over_2pi_Hz", {Param::OmegaM1}, Unit::Over2piHz},
      {"omega_m2_rad_s", {Param::OmegaM2}, Unit::RadPerSecond},
      {"omega_m2_over_2pi_Hz", {Param::OmegaM2}, Unit::Over2piHz},
      {"gamma_m1_rad_s", {Param::GammaM1}, Unit::RadPerSecond},
      {"gamma_m1_over_2pi_Hz", {Param::GammaM1}, Unit::Over2piHz},
      {"gamma_m2_rad_s", {Param::GammaM2}, Unit::RadPerSecond},
      {"gamma_m2_over_2pi_Hz", {Param::GammaM2}, Unit::Over2piHz},
      {"g1_rad_s", {Param::G1}, Unit::RadPerSecond},
      {"g1_over_2pi_Hz", {Param::G1}, Unit::Over2piHz},
      {"g2_rad_s", {Param::G2}, Unit::RadPerSecond},
      {"g2_over_2pi_Hz", {Param::G2}, Unit::Over2piHz},
      {"kappa_rad_s", {Param::Kappa}, Unit::RadPerSecond},
      {"kappa_over_2pi_Hz", {Param::Kappa}, Unit::Over2piHz},
      {"lambda_rad_s", {Param::Lambda}, Unit::RadPerSecond},
      {"lambda_over_2pi_Hz", {Param::Lambda}, Unit::Over2piHz},
      {"lambda_over_omega", {Param::Lambda}, Unit::OverOmegaM},
      {"power_W", {Param::Power}, Unit::Si},
      {"temperature_K", {Param::Temp1, Param::Temp2}, Unit::Si},
      {"temp1_K", {Param::Temp1}, Unit::Si},
      {"temp2_K", {Param::Temp2}, Unit::Si},
      {"delta_rad_s", {Param::Detuning}, Unit::RadPerSecond},
      {"delta_over_2pi_Hz", {Param::Detuning}, Unit::Over2piHz},
      {"delta_over_omega", {Param::Detuning}, Unit::OverOmegaM},
      {"delta_c_rad_s", {Param::Detuning}, Unit::RadPerSecond, true},
      {"delta_c_over_2pi_Hz", {Param::Detuning}, Unit::Over2piHz, true},
      {"delta_c_over_omega", {Param::Detuning}, Unit::OverOmegaM, true},
  };
  return table;
}

const KeyDef& lookup_key(std::string_view key) {
  for (const auto& def : key_table())
    if (def.key == key) return def;
  throw ConfigError("unknown parameter key '" + std::string(key) + "'");
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + ": '" + s + "' is not a finite number");
  }
  return v;
}

double to_si(const KeyDef& def, double value, double omega_m1) {
  switch (def.unit) {
    case Unit::Si:
    case Unit::RadPerSecond: return value;
    case Unit::Over2piHz: return 2.0 * ring_model::kPi * value;
    case Unit::OverOmegaM: return value * omega_m1;
  }
  return value;
}

void apply(PhysicalParams& p, Param target, const KeyDef& def, double value) {
  const double v = to_si(def, value, p.omega_m1);
  switch (target) {
    case Param::Theta: p.theta = v; break;
    case Param::OmegaL: p.omega_L = v; break;
    case Param::OmegaM1: p.omega_m1 = v; break;
    case Param::OmegaM2: p.omega_m2 = v; break;
    case Param::GammaM1: p.gamma_m1 = v; break;
    case Param::GammaM2: p.gamma_m2 = v; break;
    case Param::G1: p.g1 = v; break;
    case Param::G2: p.g2 = v; break;
    case Param::Kappa: p.kappa = v; break;
    case Param::Lambda: p.lambda = v; break;
    case Param::Power: p.power = v; break;
    case Param::Temp1: p.temp1 = v; break;
    case Param::Temp2: p.temp2 = v; break;
    case Param::Detuning:
      if (def.cavity_detuning) {
        p.detuning = ring_model::CavityDetuning{v};
      } else {
        p.detuning = ring_model::EffectiveDetuning{v};
      }
      break;
  }
}

}  // namespace

void ConfigLayer::set(const std::string& key, double value) {
  const KeyDef& def = lookup_key(key);
  if (!std::isfinite(value)) throw ConfigError(key + ": value must be finite");
  for (Param target : def.targets) {
    const auto it = settings_.find(target);
    if (it != settings_.end() && it->second.key != key) {
      throw ConfigError(key + ": conflicts with '" + it->second.key + "' for the same parameter");
    }
  }
  for (Param target : def.targets) settings_[target] = Setting{key, value};
}

void ConfigLayer::override_with(const std::string& key, double value) {
  const KeyDef& def = lookup_key(key);
  for (Param target : def.targets) settings_.erase(target);
  set(key, value);
}

void ConfigLayer::set_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  lookup_key(key);
  set(key, parse_double(assignment.substr(eq + 1), key));
}

ConfigLayer parse_config_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  ConfigLayer layer;
  for (const auto& [key, value] : doc.items()) {
    lookup_key(key);
    if (!value.is_number()) throw ConfigError(key + ": expected a number");
    layer.set(key, value.get<double>());
  }
  return layer;
}

ConfigLayer load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  for (const auto& def : key_table()) keys.emplace_back(def.key);
  return keys;
}

ring_model::PhysicalParams resolve_params(const std::vector<ConfigLayer>& layers) {
  std::map<Param, ConfigLayer::Setting> merged;
  for (const auto& layer : layers)
    for (const auto& [param, setting] : layer.settings()) merged[param] = setting;

  PhysicalParams p = ring_model::experimental_params();
  // Relative spellings are scaled by the final omega_m1, so apply them last.
  for (const bool relative : {false, true}) {
    for (const auto& [param, setting] : merged) {
      const KeyDef& def = lookup_key(setting.key);
      if ((def.unit == Unit::OverOmegaM) == relative) apply(p, param, def, setting.value);
    }
  }
  try {
    p.validate();
  } catch (const ring_model::ParameterError& e) {
    throw ConfigError(e.what());
  }
  return p;
}

std::vector<std::string_view> sweep_axes() {
  return {"delta_over_omega", "temperature_K", "lambda_over_omega", "power_W"};
}

void SweepSpec::validate() const {
  const auto axes = sweep_axes();
  if (std::find(axes.begin(), axes.end(), axis) == axes.end()) {
    throw ConfigError("axis: '" + axis + "' is not one of delta_over_omega, temperature_K, lambda_over_omega, power_W");
  }
  if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop)) {
    throw ConfigError("start/stop: require finite start < stop");
  }
  if (points < 2 || points > 100000) throw ConfigError("points: must lie in [2, 100000]");
  if (family) {
    lookup_key(family->key);
    if (family->key == axis) throw ConfigError("family: key must differ from the sweep axis");
    if (family->values.empty()) throw ConfigError("family: needs at least one value");
    for (double v : family->values)
      if (!std::isfinite(v)) throw ConfigError("family: values must be finite");
  }
}

std::vector<double> linear_grid(double start, double stop, std::size_t points) {
  std::vector<double> grid(points);
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = start + step * static_cast<double>(i);
  grid.back() = stop;
  return grid;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "axis_value", "family_value", "delta_over_omega", "T_K",   "lambda_rad_s", "power_W",
      "stable",     "E_M1M2",       "E_CM1",            "E_CM2", "E_1v23",       "E_2v31",
      "E_3v12",     "R_1",          "R_2",              "R_3",   "R_min",
  };
  return columns;
}

std::vector<SweepPoint> sweep_points(const SweepSpec& spec) {
  spec.validate();
  std::vector<std::optional<double>> family_values{std::nullopt};
  if (spec.family) {
    auto sorted = spec.family->values;
    std::sort(sorted.begin(), sorted.end());
    family_values.assign(sorted.begin(), sorted.end());
  }

  std::vector<SweepPoint> points;
  for (const auto& fv : family_values) {
    for (double x : linear_grid(spec.start, spec.stop, spec.points)) {
      std::vector<ConfigLayer> layers = spec.base;
      ConfigLayer sweep_layer;
      if (fv) sweep_layer.set(spec.family->key, *fv);
      sweep_layer.set(spec.axis, x);
      layers.push_back(sweep_layer);
      points.push_back({x, fv, resolve_params(layers)});
    }
  }
  return points;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, std::size_t jobs) {
  const std::vector<SweepPoint> points = sweep_points(spec);
  std::vector<SweepRow> rows(points.size());
  const auto evaluate = [&](std::size_t i) {
    const SweepPoint& pt = points[i];
    const auto report = ring_model::entanglement_report(pt.params);
    rows[i] = SweepRow{
        .axis_value = pt.axis_value,
        .family_value = pt.family_value,
        .delta_over_omega = report.derived.delta / pt.params.omega_m1,
        .T_K = pt.params.temp1,
        .lambda_rad_s = pt.params.lambda,
        .power_W = pt.params.power,
        .stability_margin = report.stability_margin,
        .measures = report.measures,
    };
  };

  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, points.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) evaluate(i);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
          try {
            evaluate(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::vector<std::string> describe_sweep(const SweepSpec& spec) {
  const PhysicalParams p = resolve_params(spec.base);
  std::vector<std::string> lines;
  lines.push_back("axis=" + spec.axis + " start=" + format_number(spec.start) + " stop=" + format_number(spec.stop) +
                  " points=" + std::to_string(spec.points));
  if (spec.family) {
    std::string fam = "family=" + spec.family->key + ":";
    for (std::size_t i = 0; i < spec.family->values.size(); ++i) {
      fam += (i ? "," : "") + format_number(spec.family->values[i]);
    }
    lines.push_back(fam);
  }
  std::string fixed = "fixed:";
  const auto add = [&](const char* key, double v) { fixed += std::string(" ") + key + "=" + format_number(v); };
  add("theta_rad", p.theta);
  add("omega_L_rad_s", p.omega_L);
  add("omega_m1_rad_s", p.omega_m1);
  add("omega_m2_rad_s", p.omega_m2);
  add("gamma_m1_rad_s", p.gamma_m1);
  add("gamma_m2_rad_s", p.gamma_m2);
  add("g1_rad_s", p.g1);
  add("g2_rad_s", p.g2);
  add("kappa_rad_s", p.kappa);
  add("lambda_rad_s", p.lambda);
  add("power_W", p.power);
  add("temp1_K", p.temp1);
  add("temp2_K", p.temp2);
  if (const auto* eff = std::get_if<ring_model::EffectiveDetuning>(&p.detuning)) {
    add("delta_rad_s", eff->delta);
  } else {
    add("delta_c_rad_s", std::get<ring_model::CavityDetuning>(p.detuning).delta_c);
  }
  lines.push_back(fixed);
  lines.push_back("swept and family parameters override the fixed values above");
  return lines;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << '\n';
  const auto& columns = csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    os << format_number(row.axis_value) << ',';
    if (row.family_value) os << format_number(*row.family_value);
    os << ',' << format_number(row.delta_over_omega) << ',' << format_number(row.T_K) << ','
       << format_number(row.lambda_rad_s) << ',' << format_number(row.power_W) << ',' << (row.measures ? 1 : 0);
    if (row.measures) {
      const auto& m = *row.measures;
      for (double v : {m.E_M1M2, m.E_CM1, m.E_CM2, m.E_1v23, m.E_2v31, m.E_3v12, m.R_1, m.R_2, m.R_3, m.R_min}) {
        os << ',' << format_number(v);
      }
    } else {
      for (int i = 0; i < 10; ++i) os << ',';
    }
    os << '\n';
  }
}

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::size_t begin = 0;
    while (true) {
      const auto comma = s.find(',', begin);
      cells.push_back(s.substr(begin, comma - begin));
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }
    return cells;
  };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      table.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    auto cells = split(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) throw ConfigError("csv: row has wrong number of cells");
    std::vector<std::optional<double>> row;
    for (const auto& cell : cells) {
      if (cell.empty()) {
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back(parse_double(cell, "csv"));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

ConfigLayer layer_of(std::initializer_list<std::pair<const char*, double>> settings) {
  ConfigLayer layer;
  for (const auto& [key, value] : settings) layer.set(key, value);
  return layer;
}

SweepSpec delta_sweep(Family family, ConfigLayer base) {
  return SweepSpec{"delta_over_omega", 0.0, 2.0, 201, std::move(family), {std::move(base)}};
}

SweepSpec temperature_sweep(Family family, ConfigLayer base) {
  return SweepSpec{"temperature_K", 0.0, 0.05, 101, std::move(family), {std::move(base)}};
}

const Family kLambdaFamily{"lambda_over_omega", {0.05, 0.10, 0.15}};
const Family kPowerFamily{"power_W", {0.030, 0.060, 0.090}};

}  // namespace

const std::vector<FigurePreset>& figure_presets() {
  static const std::vector<FigurePreset> presets = [] {
    const auto lambda_delta = layer_of({{"power_W", 0.06}, {"temperature_K", 1e-3}});
    const auto power_delta = layer_of({{"lambda_over_omega", 0.1}, {"temperature_K", 1e-3}});
    return std::vector<FigurePreset>{
        {"fig1a", "E_M1M2 versus Delta/Omega_M, lambda family",
         delta_sweep(kLambdaFamily, lambda_delta)},
        {"fig1b", "E_M1M2 versus T, lambda family",
         temperature_sweep(kLambdaFamily, layer_of({{"power_W", 0.06}, {"delta_over_omega", 0.8}}))},
        {"fig2a", "E_CM1 versus Delta/Omega_M, power family", delta_sweep(kPowerFamily, power_delta)},
        {"fig2b", "E_CM1 versus T, power family",
         temperature_sweep(kPowerFamily, layer_of({{"lambda_over_omega", 0.1}, {"delta_over_omega", 0.8}}))},
        {"fig3a", "E_CM2 versus Delta/Omega_M, power family", delta_sweep(kPowerFamily, power_delta)},
        {"fig3b", "E_CM2 versus T, power family",
         temperature_sweep(kPowerFamily, layer_of({{"lambda_over_omega", 0.1}, {"delta_over_omega", 0.8}}))},
        {"fig4a", "R_min versus Delta/Omega_M, lambda family", delta_sweep(kLambdaFamily, lambda_delta)},
        {"fig4b", "R_min versus T, lambda family",
         temperature_sweep(kLambdaFamily, layer_of({{"power_W", 0.06}, {"delta_over_omega", 0.5}}))},
        {"fig5a", "R_min versus Delta/Omega_M, power family", delta_sweep(kPowerFamily, power_delta)},
        {"fig5b", "R_min versus T, power family",
         temperature_sweep(kPowerFamily, layer_of({{"lambda_over_omega", 0.1}, {"delta_over_omega", 0.5}}))},
    };
  }();
  return presets;
}

const FigurePreset& figure_preset(std::string_view name) {
  for (const auto& preset : figure_presets())
    if (preset.name == name) return preset;
  std::string valid;
  for (const auto& preset : figure_presets()) valid += (valid.empty() ? "" : ", ") + preset.name;
  throw ConfigError("unknown figure '" + std::string(name) + "'; valid names: " + valid);
}

void write_point_report(std::ostream& os, const ring_model::PhysicalParams& p,
                        const ring_model::EntanglementReport& report) {
  const auto& d = report.derived;
  const auto kv = [&](const char* key, double v) { os << key << '=' << format_number(v) << '\n'; };
  kv("eta1_rad_s", d.eta1);
  kv("eta2_rad_s", d.eta2);
  kv("eps_L_per_s", d.eps_L);
  kv("a_s", d.a_s);
  kv("G1_rad_s", d.G1);
  kv("G2_rad_s", d.G2);
  kv("n_th1", d.n_th1);
  kv("n_th2", d.n_th2);
  kv("delta_rad_s", d.delta);
  kv("delta_over_omega", d.delta / p.omega_m1);
  kv("q1_s", d.q1_s);
  kv("q2_s", d.q2_s);
  os << "stable=" << (report.stable ? 1 : 0) << '\n';
  kv("stability_margin_rad_s", report.stability_margin);

  const char* names[] = {"E_M1M2", "E_CM1", "E_CM2", "E_1v23", "E_2v31", "E_3v12", "R_1", "R_2", "R_3", "R_min"};
  if (report.measures) {
    const auto& m = *report.measures;
    const double values[] = {m.E_M1M2, m.E_CM1, m.E_CM2, m.E_1v23, m.E_2v31, m.E_3v12, m.R_1, m.R_2, m.R_3, m.R_min};
    for (std::size_t i = 0; i < std::size(names); ++i) kv(names[i], values[i]);
  } else {
    for (const char* name : names) os << name << "=\n";
  }
}

}  // namespace optoring::sweep
