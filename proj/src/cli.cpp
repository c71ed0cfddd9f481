#include "optoring/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "optoring/sweep.hpp"

namespace optoring::cli {

namespace {

std::vector<sweep::ConfigLayer> config_layers(const std::string& config_path, const std::vector<std::string>& sets) {
  std::vector<sweep::ConfigLayer> layers;
  if (!config_path.empty()) layers.push_back(sweep::load_config_file(config_path));
  sweep::ConfigLayer cli_layer;
  for (const auto& s : sets) cli_layer.set_assignment(s);
  layers.push_back(std::move(cli_layer));
  return layers;
}

sweep::Family parse_family(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw sweep::ConfigError("family: expected key=v1,v2,...");
  sweep::Family family{text.substr(0, eq), {}};
  std::stringstream values(text.substr(eq + 1));
  std::string item;
  while (std::getline(values, item, ',')) {
    sweep::ConfigLayer probe;
    probe.set_assignment(family.key + "=" + item);
    family.values.push_back(probe.settings().begin()->second.value);
  }
  return family;
}

void write_sweep(const sweep::SweepSpec& spec, const std::vector<std::string>& extra_comments, std::size_t jobs,
                 const std::string& out_path, std::ostream& out) {
  auto comments = extra_comments;
  for (auto& line : sweep::describe_sweep(spec)) comments.push_back(std::move(line));
  const auto rows = sweep::run_sweep(spec, jobs);
  if (out_path.empty() || out_path == "-") {
    sweep::write_csv(out, rows, comments);
    return;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw sweep::ConfigError("out: cannot write '" + out_path + "'");
  sweep::write_csv(file, rows, comments);
  file.close();
  if (!file) throw sweep::ConfigError("out: failed writing '" + out_path + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady-state entanglement of a two-mirror optomechanical ring cavity", "optoring"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::optional<double> power;

  auto* point = app.add_subcommand("point", "Evaluate one parameter point");
  point->add_option("--config", config_path, "JSON parameter file");
  point->add_option("--set", sets, "Parameter override key=value (repeatable)");
  point->add_option("--power", power, "Shorthand for --set power_W=VALUE");

  sweep::SweepSpec spec;
  std::string family_text;
  std::string out_path;
  std::size_t jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "One-dimensional parameter sweep to CSV");
  sweep_cmd->add_option("--axis", spec.axis, "delta_over_omega | temperature_K | lambda_over_omega | power_W")
      ->required();
  sweep_cmd->add_option("--start", spec.start)->required();
  sweep_cmd->add_option("--stop", spec.stop)->required();
  sweep_cmd->add_option("--points", spec.points)->required();
  sweep_cmd->add_option("--family", family_text, "key=v1,v2,... (one series per value)");
  sweep_cmd->add_option("--config", config_path, "JSON parameter file");
  sweep_cmd->add_option("--set", sets, "Parameter override key=value (repeatable)");
  sweep_cmd->add_option("--out", out_path, "Output CSV (default: stdout)");
  sweep_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 1024));

  std::string figure_name;
  std::string out_dir = ".";
  auto* figure = app.add_subcommand("figure", "Write a figure preset CSV");
  figure->add_option("name", figure_name, "fig1a ... fig5b, or 'all'")->required();
  figure->add_option("--out-dir", out_dir, "Output directory");
  figure->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 1024));

  std::vector<std::string> argv_reversed(args.rbegin(), args.rend());
  try {
    app.parse(argv_reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (point->parsed()) {
      auto layers = config_layers(config_path, sets);
      if (power) layers.back().override_with("power_W", *power);
      const auto params = sweep::resolve_params(layers);
      const auto report = ring_model::entanglement_report(params);
      sweep::write_point_report(out, params, report);
      return report.stable ? kExitOk : kExitUnstable;
    }
    if (sweep_cmd->parsed()) {
      spec.base = config_layers(config_path, sets);
      if (!family_text.empty()) spec.family = parse_family(family_text);
      write_sweep(spec, {"optoring sweep"}, jobs, out_path, out);
      return kExitOk;
    }
    if (figure->parsed()) {
      std::vector<const sweep::FigurePreset*> selected;
      if (figure_name == "all") {
        for (const auto& preset : sweep::figure_presets()) selected.push_back(&preset);
      } else {
        selected.push_back(&sweep::figure_preset(figure_name));
      }
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      for (const auto* preset : selected) {
        const auto path = (std::filesystem::path(out_dir) / (preset->name + ".csv")).string();
        write_sweep(preset->spec, {"optoring figure " + preset->name + ": " + preset->title}, jobs, path, out);
        out << path << '\n';
      }
      return kExitOk;
    }
  } catch (const sweep::ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ring_model::ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace optoring::cli
