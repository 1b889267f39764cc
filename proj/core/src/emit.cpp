#include "gillum/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gillum {

std::string_view to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Svg: return "svg";
  }
  return "unknown";
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  if (name == "svg") return OutputFormat::Svg;
  throw ConfigError("unknown format '" + std::string(name) + "' (expected csv, json or svg)");
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string num12(double v) { return fmt("%.12g", v); }

bool same_grid(const CurveSet& cs) {
  const auto& ref = cs.curves.front().points;
  for (const auto& c : cs.curves) {
    if (c.points.size() != ref.size()) return false;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      if (c.points[i].first != ref[i].first) return false;
    }
  }
  return true;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

void validate_curves(const CurveSet& curves) {
  if (curves.curves.empty()) throw ConfigError("nothing to emit: the curve set is empty");
  for (const auto& c : curves.curves) {
    if (c.points.empty()) throw ConfigError("curve '" + c.label + "' has no points");
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      const auto [x, y] = c.points[i];
      if (!std::isfinite(x) || !std::isfinite(y)) {
        throw ConfigError("curve '" + c.label + "' has a non-finite point");
      }
      if (i > 0 && !(x > c.points[i - 1].first)) {
        throw ConfigError("curve '" + c.label + "' x values are not strictly increasing");
      }
    }
  }
}

std::string to_csv(const CurveSet& curves) {
  validate_curves(curves);
  if (!same_grid(curves)) throw ConfigError("CSV output needs all curves on one x grid");
  std::string out = "x";
  for (const auto& c : curves.curves) {
    if (c.label.find_first_of(",\"\n") != std::string::npos) {
      throw ConfigError("curve label '" + c.label + "' cannot be written as a CSV column");
    }
    out += ',' + c.label;
  }
  out += '\n';
  const auto& grid = curves.curves.front().points;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out += num12(grid[i].first);
    for (const auto& c : curves.curves) out += ',' + num12(c.points[i].second);
    out += '\n';
  }
  return out;
}

std::string to_json(const CurveSet& curves) {
  validate_curves(curves);
  nlohmann::ordered_json j;
  j["x_label"] = curves.x_label;
  j["y_label"] = curves.y_label;
  j["curves"] = nlohmann::ordered_json::array();
  for (const auto& c : curves.curves) {
    nlohmann::ordered_json jc;
    jc["label"] = c.label;
    jc["points"] = nlohmann::ordered_json::array();
    for (const auto& [x, y] : c.points) jc["points"].push_back({x, y});
    j["curves"].push_back(std::move(jc));
  }
  return j.dump(2) + "\n";
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

// Round step (1, 2 or 5 times a power of ten) giving about `target` ticks.
std::vector<double> linear_ticks(double lo, double hi, int target) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> ticks;
  for (int e = static_cast<int>(std::ceil(std::log10(lo) - 1e-12));
       e <= static_cast<int>(std::floor(std::log10(hi) + 1e-12)); ++e) {
    ticks.push_back(std::pow(10.0, e));
  }
  return ticks;
}

}  // namespace

std::string to_svg(const CurveSet& curves, const SvgOptions& options) {
  validate_curves(curves);
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const auto& c : curves.curves) {
    for (const auto& [x, y] : c.points) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  const bool log_x = options.log_x && x_lo > 0.0;
  if (x_hi == x_lo) {
    x_lo = log_x ? x_lo / 2 : x_lo - 1.0;
    x_hi = log_x ? x_hi * 2 : x_hi + 1.0;
  }
  if (y_hi == y_lo) {
    y_lo -= 1.0;
    y_hi += 1.0;
  } else {
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto tx = [&](double x) {
    const double f = log_x ? (std::log10(x) - std::log10(x_lo)) / (std::log10(x_hi) - std::log10(x_lo))
                           : (x - x_lo) / (x_hi - x_lo);
    return kLeft + f * plot_w;
  };
  auto ty = [&](double y) { return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
       "viewBox=\"0 0 800 600\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  s << "<rect x=\"" << fmt("%.2f", kLeft) << "\" y=\"" << fmt("%.2f", kTop) << "\" width=\""
    << fmt("%.2f", plot_w) << "\" height=\"" << fmt("%.2f", plot_h)
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double axis_y = kTop + plot_h;
  const auto xt = log_x ? log_ticks(x_lo, x_hi) : linear_ticks(x_lo, x_hi, 6);
  for (double t : xt) {
    const std::string px = fmt("%.2f", tx(t));
    s << "<line x1=\"" << px << "\" y1=\"" << fmt("%.2f", axis_y) << "\" x2=\"" << px
      << "\" y2=\"" << fmt("%.2f", axis_y + 5) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << px << "\" y=\"" << fmt("%.2f", axis_y + 20)
      << "\" text-anchor=\"middle\">" << fmt("%g", t) << "</text>\n";
  }
  for (double t : linear_ticks(y_lo, y_hi, 6)) {
    const std::string py = fmt("%.2f", ty(t));
    s << "<line x1=\"" << fmt("%.2f", kLeft - 5) << "\" y1=\"" << py << "\" x2=\""
      << fmt("%.2f", kLeft) << "\" y2=\"" << py << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << fmt("%.2f", kLeft - 8) << "\" y=\"" << fmt("%.2f", ty(t) + 4)
      << "\" text-anchor=\"end\">" << fmt("%g", t) << "</text>\n";
  }
  s << "<text x=\"" << fmt("%.2f", kLeft + plot_w / 2) << "\" y=\"" << fmt("%.2f", kHeight - 15)
    << "\" text-anchor=\"middle\">" << xml_escape(curves.x_label) << "</text>\n";
  s << "<text x=\"20\" y=\"" << fmt("%.2f", kTop + plot_h / 2)
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << fmt("%.2f", kTop + plot_h / 2)
    << ")\">" << xml_escape(curves.y_label) << "</text>\n";

  constexpr std::size_t kColors = sizeof kPalette / sizeof kPalette[0];
  for (std::size_t k = 0; k < curves.curves.size(); ++k) {
    const auto& c = curves.curves[k];
    s << "<polyline fill=\"none\" stroke=\"" << kPalette[k % kColors]
      << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      s << (i ? " " : "") << fmt("%.2f", tx(c.points[i].first)) << ','
        << fmt("%.2f", ty(c.points[i].second));
    }
    s << "\"/>\n";
  }

  const double legend_x = kLeft + plot_w + 15;
  for (std::size_t k = 0; k < curves.curves.size(); ++k) {
    const double y = kTop + 10 + 20.0 * static_cast<double>(k);
    s << "<line x1=\"" << fmt("%.2f", legend_x) << "\" y1=\"" << fmt("%.2f", y) << "\" x2=\""
      << fmt("%.2f", legend_x + 25) << "\" y2=\"" << fmt("%.2f", y) << "\" stroke=\""
      << kPalette[k % kColors] << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << fmt("%.2f", legend_x + 32) << "\" y=\"" << fmt("%.2f", y + 4) << "\">"
      << xml_escape(curves.curves[k].label) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string render(const CurveSet& curves, OutputFormat format, const SvgOptions& options) {
  switch (format) {
    case OutputFormat::Csv: return to_csv(curves);
    case OutputFormat::Json: return to_json(curves);
    case OutputFormat::Svg: return to_svg(curves, options);
  }
  throw ConfigError("unknown output format");
}

void emit(const CurveSet& curves, OutputFormat format, const std::filesystem::path& path,
          const SvgOptions& options) {
  const std::string text = render(curves, format, options);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

CurveSet parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("parse_csv: empty input");
  CurveSet cs;
  cs.x_label = "x";
  {
    std::istringstream header(line);
    std::string cell;
    std::getline(header, cell, ',');
    if (cell != "x") throw std::invalid_argument("parse_csv: header must start with 'x'");
    while (std::getline(header, cell, ',')) cs.curves.push_back({cell, {}});
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    const double x = std::stod(cell);
    for (auto& c : cs.curves) {
      if (!std::getline(row, cell, ',')) throw std::invalid_argument("parse_csv: short row");
      c.points.emplace_back(x, std::stod(cell));
    }
  }
  return cs;
}

}  // namespace gillum
