// gillum: parameter sweeps for illumination receivers, written as CSV, JSON or SVG.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gillum/emit.hpp"
#include "gillum/figures.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string figure;
  std::optional<double> kappa, nb, ni, x_min, x_max;
  std::optional<int> points;
  std::optional<std::int64_t> modes;
  std::optional<std::string> noise, format, out;
  std::vector<std::string> receivers;
  std::string config_file;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key = value lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gillum::ConfigError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw gillum::ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T value{};
  if (!CLI::detail::lexical_conversion<T, T>({text}, value)) {
    throw gillum::ConfigError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!trim(item).empty()) out.push_back(trim(item));
  }
  return out;
}

// Values given on the command line take precedence over the file.
void merge_config_file(Options& o, const CLI::App& cmd) {
  if (o.config_file.empty()) return;
  for (const auto& [key, value] : read_config_file(o.config_file)) {
    const bool on_cli = cmd.count("--" + key) > 0;
    if (key == "kappa") {
      if (!on_cli) o.kappa = parse_value<double>(key, value);
    } else if (key == "nb") {
      if (!on_cli) o.nb = parse_value<double>(key, value);
    } else if (key == "ni") {
      if (!on_cli) o.ni = parse_value<double>(key, value);
    } else if (key == "ns-min") {
      if (!on_cli) o.x_min = parse_value<double>(key, value);
    } else if (key == "ns-max") {
      if (!on_cli) o.x_max = parse_value<double>(key, value);
    } else if (key == "points") {
      if (!on_cli) o.points = parse_value<int>(key, value);
    } else if (key == "modes") {
      if (!on_cli) o.modes = parse_value<std::int64_t>(key, value);
    } else if (key == "noise") {
      if (!on_cli) o.noise = value;
    } else if (key == "format") {
      if (!on_cli) o.format = value;
    } else if (key == "out") {
      if (!on_cli) o.out = value;
    } else if (key == "receivers") {
      if (!on_cli) o.receivers = split_list(value);
    } else {
      throw gillum::ConfigError("config file: unknown key '" + key + "'");
    }
  }
}

gillum::SweepConfig build_config(const Options& o) {
  gillum::SweepConfig c = gillum::preset(gillum::parse_figure(o.figure));
  if (o.kappa) c.params.kappa = *o.kappa;
  if (o.nb) c.params.n_b = *o.nb;
  if (o.ni) c.params.n_i = *o.ni;
  if (o.x_min) c.x_min = *o.x_min;
  if (o.x_max) c.x_max = *o.x_max;
  if (o.points) c.points = *o.points;
  if (o.modes) c.params.m_modes = *o.modes;
  if (o.noise) {
    if (*o.noise == "constant") {
      c.params.noise_model = gillum::NoiseModel::Constant;
    } else if (*o.noise == "nonconstant") {
      c.params.noise_model = gillum::NoiseModel::NonConstant;
    } else {
      throw gillum::ConfigError("--noise must be 'constant' or 'nonconstant'");
    }
  }
  c.receivers = o.receivers;
  c.validate();
  return c;
}

int run(const Options& o) {
  const gillum::SweepConfig config = build_config(o);
  const gillum::OutputFormat format = gillum::parse_format(o.format.value_or("csv"));
  const gillum::CurveSet curves = gillum::run_figure(config);
  gillum::SvgOptions svg;
  svg.log_x = config.log_spaced;
  if (o.out && *o.out != "-") {
    gillum::emit(curves, format, *o.out, svg);
  } else {
    std::cout << gillum::render(curves, format, svg);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signal-to-noise sweeps for quantum and classical illumination receivers"};
  app.require_subcommand(1);

  Options o;
  CLI::App* fig = app.add_subcommand("figure", "Run a figure preset and emit its curves");
  fig->add_option("name", o.figure, "fig1|fig2|fig3|fig4|fig5a|fig5b|s1|s2|custom")->required();
  fig->add_option("--kappa", o.kappa, "Target reflectance");
  fig->add_option("--nb", o.nb, "Background mean photon number");
  fig->add_option("--ni", o.ni, "Idler mean photon number (CCT curves)");
  fig->add_option("--ns-min", o.x_min, "Lower end of the sweep (kappa for fig5a)");
  fig->add_option("--ns-max", o.x_max, "Upper end of the sweep (kappa for fig5a)");
  fig->add_option("--points", o.points, "Number of sweep points");
  fig->add_option("--modes", o.modes, "Number of mode pairs M");
  fig->add_option("--noise", o.noise, "constant|nonconstant");
  fig->add_option("--receivers", o.receivers, "Comma-separated curve labels")->delimiter(',');
  fig->add_option("--format", o.format, "csv|json|svg (default csv)");
  fig->add_option("--out", o.out, "Output file (default stdout)");
  fig->add_option("--config", o.config_file, "key=value file; command-line flags win");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    merge_config_file(o, *fig);
    return run(o);
  } catch (const gillum::ConfigError& e) {
    std::cerr << "gillum: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gillum::NumericalError& e) {
    std::cerr << "gillum: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "gillum: " << e.what() << '\n';
    return kExitConfig;
  }
}
